//! Joint measurability via block-diagonal operators in a dilation.
//!
//! A POVM `B` is compatible with `E` exactly when it can be written as
//! `B_j = J* F_j J` with `F_j = ⊕_i F_ij` block diagonal with respect to
//! the dilation's sharp measurement, each row family `(F_i1, …, F_iM)`
//! resolving the block identity. The joint POVM is the compressed grid
//! `N_ij = J* F_ij J`.

use crate::dilation::{BlockOperator, NaimarkDilation};
use crate::effect::{pauli_compose, pauli_decompose, PauliVector};
use crate::error::{Error, Result};
use crate::mat2::Matrix2;
use crate::povm::{validate_povm, DiscretePovm};
use crate::ALG_TOL;

/// A per-block resolution of the identity: for each block `i`, effects
/// `F_i1 … F_iM` (scalars on one-dimensional blocks).
#[derive(Debug, Clone)]
pub struct BlockEffectFamily {
    pub blocks: Vec<BlockPovm>,
}

/// The operators of one block: a scalar or qubit POVM with `M` outcomes.
#[derive(Debug, Clone)]
pub enum BlockPovm {
    Scalar(Vec<f64>),
    Qubit(Vec<Matrix2>),
}

impl BlockPovm {
    pub fn outcomes(&self) -> usize {
        match self {
            BlockPovm::Scalar(v) => v.len(),
            BlockPovm::Qubit(v) => v.len(),
        }
    }

    fn operator(&self, j: usize) -> BlockOperator {
        match self {
            BlockPovm::Scalar(v) => BlockOperator::Scalar(v[j]),
            BlockPovm::Qubit(v) => BlockOperator::Two(v[j]),
        }
    }

    /// Each member within `[0, 1]` and the family summing to the identity.
    fn validate(&self, tol: f64) -> Result<()> {
        match self {
            BlockPovm::Scalar(v) => {
                let sum: f64 = v.iter().sum();
                if v.iter().any(|&f| !(-tol..=1.0 + tol).contains(&f)) {
                    return Err(Error::InvalidArgument(
                        "scalar block effect outside [0, 1]".into(),
                    ));
                }
                if (sum - 1.0).abs() > tol {
                    return Err(Error::InvalidArgument(format!(
                        "scalar block sums to {sum}, not 1"
                    )));
                }
            }
            BlockPovm::Qubit(v) => {
                let sum = v.iter().fold(Matrix2::zero(), |acc, f| acc + *f);
                if sum.max_abs_diff(&Matrix2::identity()) > tol {
                    return Err(Error::InvalidArgument(
                        "qubit block does not resolve the block identity".into(),
                    ));
                }
                for f in v {
                    if !f.is_hermitian(tol) || !f.is_psd(tol) {
                        return Err(Error::InvalidArgument(
                            "qubit block effect is not PSD".into(),
                        ));
                    }
                    if !(Matrix2::identity() - *f).is_psd(tol) {
                        return Err(Error::InvalidArgument(
                            "qubit block effect exceeds the identity".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

impl BlockEffectFamily {
    pub fn outcomes(&self) -> usize {
        self.blocks.first().map_or(0, BlockPovm::outcomes)
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let m = self.outcomes();
        for (i, b) in self.blocks.iter().enumerate() {
            if b.outcomes() != m {
                return Err(Error::DimensionMismatch(format!(
                    "block {i} has {} outcomes, expected {m}",
                    b.outcomes()
                )));
            }
            b.validate(tol)
                .map_err(|e| Error::InvalidArgument(format!("block {i}: {e}")))?;
        }
        Ok(())
    }
}

/// The compressed grid `N_ij` of a joint measurement: rows marginalize to
/// the dilated POVM, columns to the synthesized one.
#[derive(Debug, Clone)]
pub struct JointPovm {
    pub grid: Vec<Vec<Matrix2>>,
}

impl JointPovm {
    pub fn rows(&self) -> usize {
        self.grid.len()
    }

    pub fn cols(&self) -> usize {
        self.grid.first().map_or(0, Vec::len)
    }

    /// Row-sum and column-sum POVMs, both validated (zero effects allowed:
    /// a joint grid may have vanishing cells).
    pub fn marginals(&self) -> Result<(DiscretePovm, DiscretePovm)> {
        let rows = DiscretePovm::new(
            self.grid
                .iter()
                .map(|r| r.iter().fold(Matrix2::zero(), |acc, n| acc + *n))
                .collect(),
        );
        let cols = DiscretePovm::new(
            (0..self.cols())
                .map(|j| self.grid.iter().fold(Matrix2::zero(), |acc, r| acc + r[j]))
                .collect(),
        );
        validate_povm(&rows, 1e-9, true)?;
        validate_povm(&cols, 1e-9, true)?;
        Ok((rows, cols))
    }

    /// Largest marginal deviation from the target pair.
    pub fn marginal_residual(&self, e: &DiscretePovm, b: &DiscretePovm) -> f64 {
        let mut res: f64 = 0.0;
        for (i, ei) in e.effects.iter().enumerate() {
            let sum = self.grid[i].iter().fold(Matrix2::zero(), |acc, n| acc + *n);
            res = res.max(sum.max_abs_diff(ei));
        }
        for (j, bj) in b.effects.iter().enumerate() {
            let sum = self.grid.iter().fold(Matrix2::zero(), |acc, r| acc + r[j]);
            res = res.max(sum.max_abs_diff(bj));
        }
        res
    }

    /// Smallest eigenvalue over all cells (≥ 0 for a genuine joint POVM).
    pub fn min_eigenvalue(&self) -> f64 {
        self.grid
            .iter()
            .flatten()
            .map(Matrix2::min_eigenvalue)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Compresses a block family through the dilation: `N_ij = J* F_ij J`.
pub fn assemble_joint(d: &NaimarkDilation, f: &BlockEffectFamily) -> Result<JointPovm> {
    f.validate(1e-9)?;
    if f.blocks.len() != d.blocks() {
        return Err(Error::DimensionMismatch(format!(
            "{} block families for {} blocks",
            f.blocks.len(),
            d.blocks()
        )));
    }
    let m = f.outcomes();
    let mut grid = Vec::with_capacity(d.blocks());
    for (i, b) in f.blocks.iter().enumerate() {
        let mut row = Vec::with_capacity(m);
        for j in 0..m {
            row.push(d.compress_block(i, &b.operator(j))?);
        }
        grid.push(row);
    }
    Ok(JointPovm { grid })
}

/// The pair criterion `‖e + b‖ + ‖e − b‖ ≤ 2`.
///
/// Necessary for compatibility of any pair of qubit effects; necessary and
/// sufficient when both are unbiased. The boundary counts as compatible.
pub fn busch_necessary(e: &PauliVector, b: &PauliVector) -> bool {
    busch_sum(e, b) <= 2.0 + ALG_TOL
}

/// The value `‖e + b‖ + ‖e − b‖` entering [`busch_necessary`].
pub fn busch_sum(e: &PauliVector, b: &PauliVector) -> f64 {
    let plus: f64 = (0..3)
        .map(|k| (e.e[k] + b.e[k]).powi(2))
        .sum::<f64>()
        .sqrt();
    let minus: f64 = (0..3)
        .map(|k| (e.e[k] - b.e[k]).powi(2))
        .sum::<f64>()
        .sqrt();
    plus + minus
}

/// The algebraic form `‖e‖² + ‖b‖² ≤ 1 + (e·b)²`.
///
/// Agrees with [`busch_necessary`] for unbiased pairs; for biased pairs it
/// can hold while the pair is incompatible, so it is not sufficient there.
pub fn busch_equivalent_form(e: &PauliVector, b: &PauliVector) -> bool {
    busch_equivalent_value(e, b) <= 1.0 + ALG_TOL
}

/// The value `‖e‖² + ‖b‖² − (e·b)²` entering [`busch_equivalent_form`].
pub fn busch_equivalent_value(e: &PauliVector, b: &PauliVector) -> f64 {
    let ne = e.bloch_norm();
    let nb = b.bloch_norm();
    let t = e.dot(b);
    ne * ne + nb * nb - t * t
}

/// The explicit block pair certifying compatibility of the axis-aligned
/// unbiased effect `E = ½(1 + aσ₃)` with an unbiased effect of Bloch
/// vector `b` satisfying the pair criterion.
///
/// Returns the two-outcome family with blocks `F`, `1 − F` and `G`,
/// `1 − G` whose compression has marginals `(E, B)`.
pub fn busch_converse_construct(a: f64, b: &PauliVector) -> Result<BlockEffectFamily> {
    if a.abs() >= 1.0 {
        return Err(Error::OutOfRange {
            name: "a",
            value: a,
            range: "(-1, 1)",
        });
    }
    if !b.is_unbiased(1e-9) {
        return Err(Error::InvalidArgument(format!(
            "b must be unbiased, got b0 = {}",
            b.e0
        )));
    }
    let e = PauliVector::new(1.0, [0.0, 0.0, a]);
    if busch_equivalent_value(&e, b) > 1.0 + ALG_TOL {
        return Err(Error::Infeasible(format!(
            "pair criterion fails: value {} > 1",
            busch_equivalent_value(&e, b)
        )));
    }
    let w = (1.0 - a * a).sqrt();
    let f = PauliVector::new(1.0, [b.e[0] / w, b.e[1] / w, b.e[2]]);
    let g = PauliVector::new(1.0, [b.e[0] / w, -b.e[1] / w, -b.e[2]]);
    let fm = pauli_compose(&f);
    let gm = pauli_compose(&g);
    Ok(BlockEffectFamily {
        blocks: vec![
            BlockPovm::Qubit(vec![fm, Matrix2::identity() - fm]),
            BlockPovm::Qubit(vec![gm, Matrix2::identity() - gm]),
        ],
    })
}

/// Rotation matrix taking the unit vector `u` onto the z-axis.
fn rotation_to_z(u: [f64; 3]) -> [[f64; 3]; 3] {
    let c = u[2];
    // axis = u × ẑ = (u₁, −u₀, 0), |axis| = sin of the rotation angle
    let k = [u[1], -u[0], 0.0];
    let s2 = k[0] * k[0] + k[1] * k[1];
    if s2 < 1e-24 {
        if c > 0.0 {
            return [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        }
        // u = −ẑ: rotate by π about the x-axis.
        return [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]];
    }
    let mut r = [[0.0f64; 3]; 3];
    // Rodrigues: R = c·I + [k]× + k kᵀ (1 − c)/s², with ‖k‖² = s².
    let kx = [[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]];
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = kx[i][j] + k[i] * k[j] * (1.0 - c) / s2;
        }
        r[i][i] += c;
    }
    r
}

fn rotate(r: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i] += r[i][j] * v[j];
        }
    }
    out
}

fn rotate_t(r: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i] += r[j][i] * v[j];
        }
    }
    out
}

/// Joint POVM of a compatible unbiased pair `(E, 1 − E)`, `(B, 1 − B)`.
///
/// Rotates the Bloch frame so that `E` points along the z-axis, applies
/// [`busch_converse_construct`] there, assembles the grid through the
/// dilation of the rotated pair, and rotates the grid back. Rows follow the
/// outcomes of `E`, columns those of `B`.
pub fn busch_joint(e: &PauliVector, b: &PauliVector) -> Result<JointPovm> {
    if !e.is_unbiased(1e-9) || !b.is_unbiased(1e-9) {
        return Err(Error::InvalidArgument(
            "both effects must be unbiased".into(),
        ));
    }
    if !busch_necessary(e, b) {
        return Err(Error::Infeasible(format!(
            "pair criterion fails: {} > 2",
            busch_sum(e, b)
        )));
    }
    let a = e.bloch_norm();
    if a >= 1.0 - 1e-12 {
        // Sharp E: only effects commuting with it are compatible, and the
        // criterion above already forces b ∥ e; the product grid works.
        let em = pauli_compose(e);
        let bm = pauli_compose(b);
        let e_eff = [em, Matrix2::identity() - em];
        let b_eff = [bm, Matrix2::identity() - bm];
        let grid = e_eff
            .iter()
            .map(|ei| b_eff.iter().map(|bj| *ei * *bj).collect())
            .collect();
        let joint = JointPovm { grid };
        if joint.min_eigenvalue() < -1e-9 {
            return Err(Error::Infeasible(
                "sharp effect is only compatible with commuting effects".into(),
            ));
        }
        return Ok(joint);
    }

    let (rot, b_rot) = if a <= 1e-14 {
        (None, *b)
    } else {
        let u = [e.e[0] / a, e.e[1] / a, e.e[2] / a];
        let r = rotation_to_z(u);
        (Some(r), PauliVector::new(1.0, rotate(&r, b.e)))
    };

    let family = busch_converse_construct(a, &b_rot)?;
    let e_axis = pauli_compose(&PauliVector::new(1.0, [0.0, 0.0, a]));
    let dilation = NaimarkDilation::build(&DiscretePovm::binary(&e_axis))?;
    let joint = assemble_joint(&dilation, &family)?;

    match rot {
        None => Ok(joint),
        Some(r) => {
            let mut grid = Vec::with_capacity(joint.rows());
            for row in &joint.grid {
                let mut out = Vec::with_capacity(row.len());
                for n in row {
                    let v = pauli_decompose(n)?;
                    out.push(pauli_compose(&PauliVector::new(v.e0, rotate_t(&r, v.e))));
                }
                grid.push(out);
            }
            Ok(JointPovm { grid })
        }
    }
}
