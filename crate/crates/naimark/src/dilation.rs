//! Minimal Naimark dilations of discrete qubit POVMs.
//!
//! For a POVM with multiplicity vector `m`, the dilation lives on
//! `ℂ^{‖m‖₁}`: the isometry `J` stacks one row `(c⁺, d⁺)` per rank-1
//! effect and two rows `(c⁺, d⁺), (c⁻, d⁻)` per rank-2 effect, and the
//! sharp measurement is the partition of the standard basis into blocks,
//! `P_i = Σ_k |b_k⟩⟨b_k|` over the rows of block `i`. Then
//! `E_i = J* P_i J` and the dimension `‖m‖₁` is minimal.

use num_complex::Complex64;

use crate::effect::{effect_rank, is_canonical_cd, spectral_split};
use crate::error::{Error, Result};
use crate::mat2::Matrix2;
use crate::povm::{validate_povm, CdVectors, DiscretePovm, MultiplicityVector};
use crate::ALG_TOL;

/// One Hermitian operator per block, matching the block dimensions.
#[derive(Debug, Clone, Copy)]
pub enum BlockOperator {
    /// A scalar acting on a one-dimensional block.
    Scalar(f64),
    /// A 2×2 operator acting on a two-dimensional block, in the block basis.
    Two(Matrix2),
}

/// The triple `(ℂ^{‖m‖₁}, P, J)` in row form.
#[derive(Debug, Clone)]
pub struct NaimarkDilation {
    /// Per-outcome block dimensions (effect ranks).
    pub m: MultiplicityVector,
    /// Isometry rows `(c_k, d_k)`, grouped by block, `(+, −)` order inside
    /// rank-2 blocks.
    pub rows: Vec<(Complex64, Complex64)>,
    /// Cumulative block offsets `K_0 = 0, …, K_N = ‖m‖₁`.
    pub block_offsets: Vec<usize>,
}

impl NaimarkDilation {
    /// Dilation dimension `‖m‖₁`.
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Number of outcomes.
    pub fn blocks(&self) -> usize {
        self.m.0.len()
    }

    /// Row range of block `i`.
    pub fn block_range(&self, i: usize) -> std::ops::Range<usize> {
        self.block_offsets[i]..self.block_offsets[i + 1]
    }

    /// Builds the minimal dilation of a valid POVM from its spectral splits.
    pub fn build(p: &DiscretePovm) -> Result<Self> {
        let m = validate_povm(p, ALG_TOL, false)?;
        let mut rows = Vec::with_capacity(m.l1());
        let mut block_offsets = vec![0usize];
        for (e, &rank) in p.effects.iter().zip(&m.0) {
            let s = spectral_split(e, ALG_TOL)?;
            rows.push((s.c_plus, s.d_plus));
            if rank == 2 {
                rows.push((s.c_minus, s.d_minus));
            }
            block_offsets.push(rows.len());
        }
        Ok(Self {
            m,
            rows,
            block_offsets,
        })
    }

    /// Builds a dilation from user-supplied orthonormal vectors and a block
    /// layout. The declared `m` is advisory: the actual ranks of the block
    /// marginals may be lower (see [`Self::rank_discrepancies`]).
    pub fn from_cd(v: &CdVectors, m: &MultiplicityVector) -> Result<Self> {
        v.validate(ALG_TOL)?;
        if v.len() != m.l1() {
            return Err(Error::DimensionMismatch(format!(
                "{} rows supplied for ‖m‖₁ = {}",
                v.len(),
                m.l1()
            )));
        }
        if m.0.iter().any(|&mi| mi != 1 && mi != 2) {
            return Err(Error::InvalidArgument(
                "block dimensions must be 1 or 2".into(),
            ));
        }
        let mut block_offsets = vec![0usize];
        for &mi in &m.0 {
            block_offsets.push(block_offsets.last().unwrap() + mi as usize);
        }
        Ok(Self {
            m: m.clone(),
            rows: v.c.iter().copied().zip(v.d.iter().copied()).collect(),
            block_offsets,
        })
    }

    /// The compressed POVM `E_i = J* P_i J`.
    pub fn povm(&self) -> DiscretePovm {
        DiscretePovm::new((0..self.blocks()).map(|i| self.block_marginal(i)).collect())
    }

    /// `J* P_i J`, the sum of row Gram matrices over block `i`.
    pub fn block_marginal(&self, i: usize) -> Matrix2 {
        self.block_range(i)
            .map(|k| Matrix2::gram(self.rows[k].0, self.rows[k].1))
            .fold(Matrix2::zero(), |acc, g| acc + g)
    }

    /// Residual of the isometry property `J*J = 1`.
    pub fn isometry_residual(&self) -> f64 {
        let mut g = Matrix2::zero();
        for &(c, d) in &self.rows {
            g = g + Matrix2::new(
                Complex64::new(c.norm_sqr(), 0.0),
                c.conj() * d,
                d.conj() * c,
                Complex64::new(d.norm_sqr(), 0.0),
            );
        }
        g.max_abs_diff(&Matrix2::identity())
    }

    /// Max over blocks of `‖J* P_i J − E_i‖`, combined with the
    /// column-orthonormality residual, as a single max residual.
    pub fn verify(&self, p: &DiscretePovm) -> Result<f64> {
        if p.len() != self.blocks() {
            return Err(Error::DimensionMismatch(format!(
                "POVM has {} outcomes, dilation has {} blocks",
                p.len(),
                self.blocks()
            )));
        }
        let mut res = self.isometry_residual();
        for (i, e) in p.effects.iter().enumerate() {
            res = res.max(self.block_marginal(i).max_abs_diff(e));
        }
        Ok(res)
    }

    /// Blocks whose actual marginal rank differs from the declared dimension,
    /// as `(block, declared, actual)`. Non-empty output flags a dilation that
    /// is not minimal for the POVM it compresses to.
    pub fn rank_discrepancies(&self, tol: f64) -> Vec<(usize, u8, u8)> {
        (0..self.blocks())
            .filter_map(|i| {
                let actual = effect_rank(&self.block_marginal(i), tol).ok()?;
                (actual != self.m.0[i]).then_some((i, self.m.0[i], actual))
            })
            .collect()
    }

    /// Canonical-domain check on every row.
    pub fn rows_canonical(&self, tol: f64) -> bool {
        self.rows.iter().all(|&(c, d)| is_canonical_cd(c, d, tol))
    }

    /// Minimality witness: the vectors `P_i c`, `P_i d` span `ℂ^{‖m‖₁}`.
    ///
    /// Per block this reduces to a nonzero row (dimension 1) or to linear
    /// independence of the block rows of `J` (dimension 2), decided at the
    /// rank threshold.
    pub fn is_minimal(&self, tol: f64) -> bool {
        (0..self.blocks()).all(|i| {
            let r = self.block_range(i);
            match r.len() {
                1 => {
                    let (c, d) = self.rows[r.start];
                    c.norm() + d.norm() > tol
                }
                2 => {
                    let (c0, d0) = self.rows[r.start];
                    let (c1, d1) = self.rows[r.start + 1];
                    (c0 * d1 - c1 * d0).norm() > tol
                }
                _ => false,
            }
        })
    }

    /// `Σ_i J* F⁽ⁱ⁾ J` for one Hermitian operator per block; linear in `F`.
    pub fn compress(&self, f: &[BlockOperator]) -> Result<Matrix2> {
        if f.len() != self.blocks() {
            return Err(Error::DimensionMismatch(format!(
                "{} block operators for {} blocks",
                f.len(),
                self.blocks()
            )));
        }
        let mut out = Matrix2::zero();
        for (i, op) in f.iter().enumerate() {
            out = out + self.compress_block(i, op)?;
        }
        Ok(out)
    }

    /// `J* F J` for a single block operator supported on block `i`.
    pub fn compress_block(&self, i: usize, op: &BlockOperator) -> Result<Matrix2> {
        let r = self.block_range(i);
        match (op, r.len()) {
            (BlockOperator::Scalar(s), 1) => {
                let (c, d) = self.rows[r.start];
                Ok(Matrix2::gram(c, d).scale(*s))
            }
            (BlockOperator::Two(f), 2) => {
                // J_i† F J_i with J_i the 2×2 block of isometry rows.
                let ji = Matrix2::new(
                    self.rows[r.start].0,
                    self.rows[r.start].1,
                    self.rows[r.start + 1].0,
                    self.rows[r.start + 1].1,
                );
                Ok(ji.adjoint() * *f * ji)
            }
            _ => Err(Error::DimensionMismatch(format!(
                "operator shape does not match block {i} of dimension {}",
                r.len()
            ))),
        }
    }

    /// The four compressed Pauli words of a two-dimensional block: matrices
    /// `J* Y_i* σ_μ Y_i J` for μ = 0..3, where `Y_i` maps the block onto ℂ².
    ///
    /// Compressing a block operator with Pauli components `f` equals
    /// `½ Σ_μ f^μ · table[μ]`.
    pub fn pauli_conjugation_table(&self, i: usize) -> Result<[Matrix2; 4]> {
        let r = self.block_range(i);
        if r.len() != 2 {
            return Err(Error::RankMismatch {
                expected: 2,
                actual: r.len() as u8,
            });
        }
        let (c0, d0) = self.rows[r.start];
        let (c1, d1) = self.rows[r.start + 1];
        let g0 = Matrix2::gram(c0, d0);
        let g1 = Matrix2::gram(c1, d1);
        let cross = Matrix2::new(
            c1 * c0.conj() + c0 * c1.conj(),
            d1 * c0.conj() + d0 * c1.conj(),
            c1 * d0.conj() + c0 * d1.conj(),
            d1 * d0.conj() + d0 * d1.conj(),
        );
        let i_unit = Complex64::new(0.0, 1.0);
        let cross_i = Matrix2::new(
            (-c1 * c0.conj() + c0 * c1.conj()) * i_unit,
            (-d1 * c0.conj() + d0 * c1.conj()) * i_unit,
            (-c1 * d0.conj() + c0 * d1.conj()) * i_unit,
            (-d1 * d0.conj() + d0 * d1.conj()) * i_unit,
        );
        Ok([g0 + g1, cross, cross_i, g0 - g1])
    }
}
