//! The ℤ₃-covariant three-outcome qubit family and its joint measurements.
//!
//! The noiseless family is the trine `E_k = ⅔ U_k |+⟩⟨+| U_k*` with
//! `U_k = R(2kπ/3)`; its noisy version mixes in uniform noise with weight
//! `1 − λ`. For `λ < 1` the minimal dilation is six-dimensional and carries
//! the group action by block permutations, which reduces every covariant
//! joint measurement to a single 2×2 seed matrix `A` via the Schur-product
//! correspondence `N_k0 = U_k (M^λ ⋆ A^{(k)}) U_k*`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::joint::JointPovm;
use crate::mat2::Matrix2;
use crate::povm::DiscretePovm;

/// Noise weights of the pair under study: `lambda` on the trine side,
/// `eta` on the target side.
#[derive(Debug, Clone, Copy)]
pub struct TrinaryParams {
    pub lambda: f64,
    pub eta: f64,
}

impl TrinaryParams {
    pub fn new(lambda: f64, eta: f64) -> Result<Self> {
        for (name, value) in [("lambda", lambda), ("eta", eta)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::OutOfRange {
                    name,
                    value,
                    range: "[0, 1]",
                });
            }
        }
        Ok(Self { lambda, eta })
    }
}

/// The rotation unitaries `U_k = R(2kπ/3)`, k = 0, 1, 2.
pub fn z3_unitaries() -> [Matrix2; 3] {
    [rotation(0), rotation(1), rotation(2)]
}

fn rotation(k: usize) -> Matrix2 {
    let theta = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
    let (s, c) = theta.sin_cos();
    Matrix2::from_real(c, -s, s, c)
}

/// The noisy trine `E_k^λ = λ·⅔ U_k|+⟩⟨+|U_k* + (1 − λ)·1/3`.
pub fn build_trinary(lambda: f64) -> Result<DiscretePovm> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
            range: "[0, 1]",
        });
    }
    let us = z3_unitaries();
    let seed = Matrix2::diag((1.0 + lambda) / 3.0, (1.0 - lambda) / 3.0);
    Ok(DiscretePovm::new(
        us.iter().map(|u| *u * seed * u.adjoint()).collect(),
    ))
}

/// The covariant target `B_k^η = U_k (η·⅔|ψ⟩⟨ψ| + (1 − η)·1/3) U_k*`.
pub fn build_target(eta: f64, psi: [Complex64; 2]) -> Result<DiscretePovm> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::OutOfRange {
            name: "eta",
            value: eta,
            range: "[0, 1]",
        });
    }
    let norm = (psi[0].norm_sqr() + psi[1].norm_sqr()).sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "psi must be a unit vector, got norm {norm}"
        )));
    }
    let proj = Matrix2::gram(psi[0].conj(), psi[1].conj());
    let seed = proj.scale(eta * 2.0 / 3.0) + Matrix2::identity().scale((1.0 - eta) / 3.0);
    let us = z3_unitaries();
    Ok(DiscretePovm::new(
        us.iter().map(|u| *u * seed * u.adjoint()).collect(),
    ))
}

/// [`build_target`] at `ψ = |−⟩`, the vector used by the diagonal ansatz.
pub fn target_minus(eta: f64) -> Result<DiscretePovm> {
    build_target(eta, [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
}

/// The six-dimensional covariant dilation of the noisy trine.
///
/// Rows come in blocks `|k±⟩` with weights `√((1 ± λ)/3)` rotated by
/// `U_k`; the permutation unitaries `V_k` shift blocks, intertwine the
/// isometry with the qubit action and shuttle `P₀` through all blocks.
#[derive(Debug, Clone)]
pub struct CovariantDilation {
    pub lambda: f64,
    /// Rows `(c, d)` of the 6×2 isometry, block `k` at rows `2k, 2k + 1`.
    pub rows: [[f64; 2]; 6],
}

/// Builds the covariant dilation for `λ ∈ [0, 1)`.
///
/// At `λ = 1` the effects are rank 1 and the minimal dilation is the
/// three-dimensional one produced by [`crate::dilation::NaimarkDilation`].
pub fn build_covariant_dilation(lambda: f64) -> Result<CovariantDilation> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
            range: "[0, 1)",
        });
    }
    let wp = ((1.0 + lambda) / 3.0).sqrt();
    let wm = ((1.0 - lambda) / 3.0).sqrt();
    let mut rows = [[0.0f64; 2]; 6];
    for k in 0..3 {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
        let (s, c) = theta.sin_cos();
        // ⟨±| U_k* are the columns of U_k.
        rows[2 * k] = [wp * c, wp * s];
        rows[2 * k + 1] = [-wm * s, wm * c];
    }
    Ok(CovariantDilation { lambda, rows })
}

impl CovariantDilation {
    /// `J* P_k J`, the Gram sum over block `k`.
    pub fn marginal(&self, k: usize) -> Matrix2 {
        let g = |r: usize| {
            Matrix2::gram(
                Complex64::new(self.rows[r][0], 0.0),
                Complex64::new(self.rows[r][1], 0.0),
            )
        };
        g(2 * k) + g(2 * k + 1)
    }

    /// Index map of the block-shift unitary `V_k`: basis vector `r` is sent
    /// to `permutation(k)[r]`.
    pub fn permutation(&self, k: usize) -> [usize; 6] {
        let mut p = [0usize; 6];
        for l in 0..3 {
            for s in 0..2 {
                p[2 * l + s] = 2 * ((l + k) % 3) + s;
            }
        }
        p
    }

    /// Residual of the intertwining relation `J U_k = V_k J` over all `k`.
    pub fn intertwining_residual(&self) -> f64 {
        let us = z3_unitaries();
        let mut res: f64 = 0.0;
        for k in 0..3 {
            let perm = self.permutation(k);
            for r in 0..6 {
                // (J U_k)[r] compared against row perm⁻¹(r)… directly:
                // (V_k J)[perm[r0]] = J[r0].
                let u = &us[k];
                let ju = [
                    self.rows[r][0] * u.m[0][0].re + self.rows[r][1] * u.m[1][0].re,
                    self.rows[r][0] * u.m[0][1].re + self.rows[r][1] * u.m[1][1].re,
                ];
                let target = self.rows[invert(&perm, r)];
                res = res
                    .max((ju[0] - target[0]).abs())
                    .max((ju[1] - target[1]).abs());
            }
        }
        res
    }

    /// Max residual of `E_k^λ = J* P_k J` plus the intertwining residual.
    pub fn verify(&self) -> Result<f64> {
        let povm = build_trinary(self.lambda)?;
        let mut res = self.intertwining_residual();
        for (k, e) in povm.effects.iter().enumerate() {
            res = res.max(self.marginal(k).max_abs_diff(e));
        }
        Ok(res)
    }
}

fn invert(perm: &[usize; 6], r: usize) -> usize {
    perm.iter().position(|&p| p == r).expect("permutation")
}

/// `M^λ`, the Schur factor turning seed matrices into grid cells.
pub fn schur_m(lambda: f64) -> Matrix2 {
    let s = (1.0 - lambda * lambda).max(0.0).sqrt();
    Matrix2::from_real(1.0 + lambda, s, s, 1.0 - lambda).scale(1.0 / 3.0)
}

/// `N^λ`, the entrywise reciprocal of `M^λ`; singular at `λ = 1`.
pub fn schur_n(lambda: f64) -> Result<Matrix2> {
    if lambda >= 1.0 {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
            range: "[0, 1)",
        });
    }
    let s = (1.0 - lambda * lambda).sqrt();
    Ok(Matrix2::from_real(1.0 / (1.0 + lambda), 1.0 / s, 1.0 / s, 1.0 / (1.0 - lambda)).scale(3.0))
}

/// Entrywise (Schur) product.
pub fn schur_product(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut m = a.m;
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] *= b.m[i][j];
        }
    }
    Matrix2 { m }
}

/// Recovers the seed matrix of a grid cell: `A = (U_k* N_kj U_k) ⋆ N^λ`.
pub fn schur_recover_a(n_kj: &Matrix2, k: usize, lambda: f64) -> Result<Matrix2> {
    let u = z3_unitaries()[k % 3];
    Ok(schur_product(&(u.adjoint() * *n_kj * u), &schur_n(lambda)?))
}

/// Inverse of [`schur_recover_a`]: `N_kj = U_k (M^λ ⋆ A) U_k*`.
pub fn schur_cell_from_a(a: &Matrix2, k: usize, lambda: f64) -> Matrix2 {
    let u = z3_unitaries()[k % 3];
    u * schur_product(&schur_m(lambda), a) * u.adjoint()
}

/// The ansatz noise threshold `f(λ) = λ² / (2(1 − √(1 − λ²)))`.
///
/// Evaluated in the rationalized form `(1 + √(1 − λ²))/2`, which is the
/// same function on `(0, 1]` and extends continuously to `f(0) = 1`. It
/// runs from 1 down to ½ and fixes `f(4/5) = 4/5`.
pub fn trinary_threshold(lambda: f64) -> f64 {
    (1.0 + (1.0 - lambda * lambda).max(0.0).sqrt()) / 2.0
}

/// Solves the diagonal ansatz: `Some((d, e))` with `e = ⅔ − d` when
/// `η ≤ f(λ)`, `None` otherwise. Always `d ≤ ⅓`.
///
/// Boundary ties resolve toward feasible within an absolute band of 1e−12,
/// so exact threshold points like `λ = η = 4/5` land on the closed side.
pub fn trinary_ansatz_solve(p: &TrinaryParams) -> Option<(f64, f64)> {
    if p.eta > trinary_threshold(p.lambda) + 1e-12 {
        return None;
    }
    let s = (1.0 - p.lambda * p.lambda).max(0.0).sqrt();
    // d = ⅓ − 2η / (3(1 + s)), the rationalized form of
    // (λ² − 2η(1 − √(1 − λ²))) / (3λ²); finite at λ = 0 where it becomes
    // (1 − η)/3.
    let d = (1.0 / 3.0 - 2.0 * p.eta / (3.0 * (1.0 + s))).max(0.0);
    Some((d, 2.0 / 3.0 - d))
}

/// Builds the covariant joint grid of `E^λ` and `B^η` from the diagonal
/// ansatz seed `A = diag(d, e)` at `ψ = |−⟩`.
///
/// Column 0 is `N_k0 = U_k (M^λ ⋆ U_k* A U_k) U_k*`; the remaining columns
/// follow from covariance, `N_{k+ℓ, j+ℓ} = U_ℓ N_kj U_ℓ*`.
pub fn build_trinary_joint(p: &TrinaryParams) -> Result<JointPovm> {
    build_trinary_joint_for(p, [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
}

/// [`build_trinary_joint`] with an explicit target vector. Only the
/// diagonal ansatz is implemented, so `ψ` must be `|−⟩` up to phase.
pub fn build_trinary_joint_for(p: &TrinaryParams, psi: [Complex64; 2]) -> Result<JointPovm> {
    let norm = (psi[0].norm_sqr() + psi[1].norm_sqr()).sqrt();
    if (norm - 1.0).abs() > 1e-9 || psi[0].norm() > 1e-9 {
        return Err(Error::InvalidArgument(
            "only the diagonal ansatz at ψ = |−⟩ is implemented".into(),
        ));
    }
    let (d, e) = trinary_ansatz_solve(p).ok_or_else(|| {
        Error::Infeasible(format!(
            "η = {} exceeds the ansatz threshold f(λ) = {}",
            p.eta,
            trinary_threshold(p.lambda)
        ))
    })?;
    let us = z3_unitaries();
    let a = Matrix2::diag(d, e);
    let col0: Vec<Matrix2> = (0..3)
        .map(|k| {
            let ak = us[k].adjoint() * a * us[k];
            schur_cell_from_a(&ak, k, p.lambda)
        })
        .collect();
    let grid = (0..3)
        .map(|k| {
            (0..3)
                .map(|j| us[j] * col0[(k + 3 - j) % 3] * us[j].adjoint())
                .collect()
        })
        .collect();
    Ok(JointPovm { grid })
}

/// Covariant symmetrization `Ñ_kj = ⅓ Σ_s U_s* N_{k+s, j+s} U_s`; has the
/// same marginals as the input grid.
pub fn symmetrize(joint: &JointPovm) -> Result<JointPovm> {
    if joint.rows() != 3 || joint.cols() != 3 {
        return Err(Error::DimensionMismatch(
            "covariant symmetrization needs a 3×3 grid".into(),
        ));
    }
    let us = z3_unitaries();
    let grid = (0..3)
        .map(|k| {
            (0..3)
                .map(|j| {
                    (0..3)
                        .map(|s| us[s].adjoint() * joint.grid[(k + s) % 3][(j + s) % 3] * us[s])
                        .fold(Matrix2::zero(), |acc, m| acc + m)
                        .scale(1.0 / 3.0)
                })
                .collect()
        })
        .collect();
    Ok(JointPovm { grid })
}
