//! Continuous single-photon qubit POVMs as closed-form operator densities.
//!
//! The projected noisy quadratures, number and phase measurements of the
//! 0/1-photon subspace all have 2×2 densities whose entries are polynomials
//! of total degree ≤ 2 against Gaussian reference measures (or first-order
//! trigonometric functions against the uniform angle). Joint families,
//! marginalization and positivity are therefore exact finite computations:
//! marginals apply Gaussian moment rules coefficientwise, and positivity
//! reduces to the global minimum of a quadratic determinant.

pub mod poly;
pub mod trig;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat2::Matrix2;
pub use poly::{Poly2, QuadInfimum, RealQuad};
pub use trig::{TrigEntry, TrigOvm};

/// Number of free outcome variables of a Gaussian density.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarCount {
    One,
    Two,
}

/// A labeled family of 2×2 polynomial densities against `e^{−x²} dx/√π`
/// (one variable) or `e^{−x²−y²} dx dy/π` (two variables).
#[derive(Debug, Clone)]
pub struct GaussianPolyOvm {
    pub vars: VarCount,
    pub labels: Vec<[[Poly2; 2]; 2]>,
}

/// Positivity verdict with an explicit counterexample when negative.
#[derive(Debug, Clone, Copy)]
pub struct Positivity {
    pub is_positive: bool,
    /// `(label, point, value)` of a violation.
    pub witness: Option<(usize, (f64, f64), f64)>,
}

impl GaussianPolyOvm {
    /// Largest coefficientwise deviation from pointwise Hermiticity.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut res: f64 = 0.0;
        for m in &self.labels {
            res = res.max(m[1][0].sub(&m[0][1].conj()).max_coeff_norm());
            res = res.max(m[0][0].max_imag()).max(m[1][1].max_imag());
        }
        res
    }

    /// Full Gaussian integral of one label.
    pub fn label_total(&self, l: usize) -> Matrix2 {
        let m = &self.labels[l];
        Matrix2::new(
            m[0][0].gaussian_mean(),
            m[0][1].gaussian_mean(),
            m[1][0].gaussian_mean(),
            m[1][1].gaussian_mean(),
        )
    }

    /// Total integral over labels and outcome variables.
    pub fn total(&self) -> Matrix2 {
        (0..self.labels.len())
            .map(|l| self.label_total(l))
            .fold(Matrix2::zero(), |acc, m| acc + m)
    }

    pub fn normalization_residual(&self) -> f64 {
        self.total().max_abs_diff(&Matrix2::identity())
    }

    /// Entrywise label sum; drops the discrete outcome.
    pub fn sum_labels(&self) -> GaussianPolyOvm {
        let mut out = [[Poly2::zero(); 2]; 2];
        for m in &self.labels {
            for i in 0..2 {
                for j in 0..2 {
                    out[i][j] = out[i][j].add(&m[i][j]);
                }
            }
        }
        GaussianPolyOvm {
            vars: self.vars,
            labels: vec![out],
        }
    }

    /// Gaussian marginal over the second variable.
    pub fn marginal_over_y(&self) -> Result<GaussianPolyOvm> {
        if self.vars != VarCount::Two {
            return Err(Error::InvalidArgument(
                "density has a single outcome variable".into(),
            ));
        }
        Ok(GaussianPolyOvm {
            vars: VarCount::One,
            labels: self
                .labels
                .iter()
                .map(|m| {
                    [
                        [m[0][0].integrate_out_y(), m[0][1].integrate_out_y()],
                        [m[1][0].integrate_out_y(), m[1][1].integrate_out_y()],
                    ]
                })
                .collect(),
        })
    }

    /// Gaussian marginal over the first variable; the survivor moves into
    /// the first variable slot.
    pub fn marginal_over_x(&self) -> Result<GaussianPolyOvm> {
        if self.vars != VarCount::Two {
            return Err(Error::InvalidArgument(
                "density has a single outcome variable".into(),
            ));
        }
        Ok(GaussianPolyOvm {
            vars: VarCount::One,
            labels: self
                .labels
                .iter()
                .map(|m| {
                    [
                        [m[0][0].integrate_out_x(), m[0][1].integrate_out_x()],
                        [m[1][0].integrate_out_x(), m[1][1].integrate_out_x()],
                    ]
                })
                .collect(),
        })
    }

    /// Density matrix at a fixed outcome point.
    pub fn at(&self, l: usize, x: f64, y: f64) -> Matrix2 {
        let m = &self.labels[l];
        Matrix2::new(
            m[0][0].eval(x, y),
            m[0][1].eval(x, y),
            m[1][0].eval(x, y),
            m[1][1].eval(x, y),
        )
    }

    /// Largest coefficientwise difference to another density.
    pub fn max_coeff_diff(&self, other: &GaussianPolyOvm) -> f64 {
        let mut res: f64 = 0.0;
        for (a, b) in self.labels.iter().zip(&other.labels) {
            for i in 0..2 {
                for j in 0..2 {
                    res = res.max(a[i][j].sub(&b[i][j]).max_coeff_norm());
                }
            }
        }
        res
    }

    /// Pointwise positivity over all outcome points.
    ///
    /// Checks the upper-left entry and the determinant of every label; both
    /// must be globally nonnegative quadratics. A determinant of degree
    /// above 2 (which none of the built families produce) is reported as
    /// unsupported rather than approximated.
    pub fn positivity(&self, tol: f64) -> Result<Positivity> {
        let herm = self.hermiticity_residual();
        if herm > tol {
            return Err(Error::UnsupportedDensity(format!(
                "density is not pointwise Hermitian (residual {herm:.3e})"
            )));
        }
        for (l, m) in self.labels.iter().enumerate() {
            let ul = m[0][0]
                .to_real(tol)
                .ok_or_else(|| Error::UnsupportedDensity("diagonal entry is not real".into()))?;
            if let Some(p) = ul.negativity_witness(tol) {
                return Ok(Positivity {
                    is_positive: false,
                    witness: Some((l, p, ul.eval(p.0, p.1))),
                });
            }
            let det4 = m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0]));
            let det = det4
                .to_quadratic(tol)
                .ok_or_else(|| {
                    Error::UnsupportedDensity(format!("label {l}: determinant has degree above 2"))
                })?
                .to_real(tol)
                .ok_or_else(|| {
                    Error::UnsupportedDensity(format!("label {l}: determinant is not real"))
                })?;
            if let Some(p) = det.negativity_witness(tol) {
                return Ok(Positivity {
                    is_positive: false,
                    witness: Some((l, p, det.eval(p.0, p.1))),
                });
            }
        }
        Ok(Positivity {
            is_positive: true,
            witness: None,
        })
    }
}

/// Convenience wrapper matching the boolean contract of the positivity
/// predicate.
pub fn ovm_is_positive(o: &GaussianPolyOvm) -> Result<bool> {
    Ok(o.positivity(1e-9)?.is_positive)
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::OutOfRange {
            name,
            value,
            range: "[0, 1]",
        });
    }
    Ok(())
}

/// Noise weights of the continuous triple: number noise `eps`, quadrature
/// noises `eps0` (axis θ = 0) and `eps_theta` (axis θ).
#[derive(Debug, Clone, Copy)]
pub struct NoiseParams {
    pub eps: f64,
    pub eps0: f64,
    pub eps_theta: f64,
    pub theta: f64,
}

impl NoiseParams {
    /// The rotated-axis angle must keep the quadratures distinct,
    /// `θ ∉ {0, π}` (mod 2π).
    pub fn new(eps: f64, eps0: f64, eps_theta: f64, theta: f64) -> Result<Self> {
        check_unit("eps", eps)?;
        check_unit("eps0", eps0)?;
        check_unit("eps_theta", eps_theta)?;
        if theta.sin().abs() <= 1e-12 {
            return Err(Error::OutOfRange {
                name: "theta",
                value: theta,
                range: "(0, π) ∪ (π, 2π)",
            });
        }
        Ok(Self {
            eps,
            eps0,
            eps_theta,
            theta,
        })
    }

    /// Equal noise on all three measurements.
    pub fn equal(eps: f64, theta: f64) -> Result<Self> {
        Self::new(eps, eps, eps, theta)
    }
}

/// The noisy projected quadrature density
/// `[[1, (1−ε)√2 x e^{−iθ}], [(1−ε)√2 x e^{iθ}, (1−ε)2x² + ε]]`
/// against `e^{−x²} dx/√π`.
pub fn quadrature_prono(theta: f64, eps_theta: f64) -> Result<GaussianPolyOvm> {
    check_unit("eps_theta", eps_theta)?;
    let phase = Complex64::from_polar(1.0, -theta);
    let amp = (1.0 - eps_theta) * 2f64.sqrt();
    let mut ul = Poly2::zero();
    ul.c[0] = Complex64::new(1.0, 0.0);
    let mut ur = Poly2::zero();
    ur.c[1] = phase * amp;
    let mut lr = Poly2::zero();
    lr.c[0] = Complex64::new(eps_theta, 0.0);
    lr.c[3] = Complex64::new(2.0 * (1.0 - eps_theta), 0.0);
    Ok(GaussianPolyOvm {
        vars: VarCount::One,
        labels: vec![[[ul, ur], [ur.conj(), lr]]],
    })
}

/// The noisy projected number POVM: `diag(1 − ε/2, ε/2)` and its swap.
pub fn number_prono(eps: f64) -> Result<[Matrix2; 2]> {
    check_unit("eps", eps)?;
    Ok([
        Matrix2::diag(1.0 - eps / 2.0, eps / 2.0),
        Matrix2::diag(eps / 2.0, 1.0 - eps / 2.0),
    ])
}

/// The noisy projected canonical phase density
/// `[[1, (1−ε)e^{−iθ}], [(1−ε)e^{iθ}, 1]]` against `dθ/2π`.
pub fn phase_prono(eps: f64) -> Result<TrigOvm> {
    check_unit("eps", eps)?;
    let perp = Complex64::new(1.0 - eps, 0.0);
    Ok(TrigOvm {
        labels: vec![[
            [TrigEntry::constant(1.0), TrigEntry::e_minus(perp)],
            [TrigEntry::e_plus(perp), TrigEntry::constant(1.0)],
        ]],
    })
}

/// Shared quadratic kernel of the triple family:
/// `(1−ε₀)2x² + (1−ε_θ)2y² + (1−ε₀)(1−ε_θ)4xy cosθ + shift`.
fn quad_kernel(a0: f64, at: f64, cos_theta: f64, shift: f64) -> Poly2 {
    let mut p = Poly2::zero();
    p.c[0] = Complex64::new(shift, 0.0);
    p.c[3] = Complex64::new(2.0 * a0, 0.0);
    p.c[5] = Complex64::new(2.0 * at, 0.0);
    p.c[4] = Complex64::new(4.0 * a0 * at * cos_theta, 0.0);
    p
}

/// Linear off-diagonal kernel `a₀√2 x + a_θ√2 e^{−iθ} y`.
fn lin_kernel(a0: f64, at: f64, theta: f64) -> Poly2 {
    let mut p = Poly2::zero();
    p.c[1] = Complex64::new(a0 * 2f64.sqrt(), 0.0);
    p.c[2] = Complex64::from_polar(at * 2f64.sqrt(), -theta);
    p
}

/// The joint operator measure of the triple (number, both quadratures):
/// labels {0, 1}, bivariate density.
pub fn triple_joint_g(p: &NoiseParams) -> Result<GaussianPolyOvm> {
    let a0 = 1.0 - p.eps0;
    let at = 1.0 - p.eps_theta;
    let lin = lin_kernel(a0, at, p.theta);
    let quad = quad_kernel(a0, at, p.theta.cos(), p.eps0 + p.eps_theta - 2.0);
    let label = |w: f64, w_comp: f64| {
        let ul = Poly2::constant_re(w);
        let ur = lin.scale(Complex64::new(w, 0.0));
        let lr = quad
            .scale(Complex64::new(w, 0.0))
            .add(&Poly2::constant_re(w_comp));
        [[ul, ur], [ur.conj(), lr]]
    };
    Ok(GaussianPolyOvm {
        vars: VarCount::Two,
        labels: vec![
            label(1.0 - p.eps / 2.0, p.eps / 2.0),
            label(p.eps / 2.0, 1.0 - p.eps / 2.0),
        ],
    })
}

/// Positivity of the triple family: `ε/(2−ε) + ε₀ + ε_θ − 2 ≥ 0`.
pub fn threshold_triple(p: &NoiseParams) -> bool {
    p.eps / (2.0 - p.eps) + p.eps0 + p.eps_theta - 2.0 >= 0.0
}

/// Positivity of the two-quadrature family: `ε₀ + ε_θ − 1 ≥ 0`.
pub fn threshold_pair_quadratures(eps0: f64, eps_theta: f64) -> bool {
    eps0 + eps_theta - 1.0 >= 0.0
}

/// Positivity of the number–quadrature family:
/// `2/(2−ε) + ε_axis − 2 ≥ 0`.
pub fn threshold_pair_number_quadrature(eps: f64, eps_axis: f64) -> bool {
    2.0 / (2.0 - eps) + eps_axis - 2.0 >= 0.0
}

/// The modified two-label ansatz with free parameter `f` at equal noise:
/// raw coefficients, no feasibility requirement. The dependent coefficients
/// are `g = ε/2 − 2f`, `h = 1 − ε − f`, `i = 3ε/2 − 1 + 2f`.
pub fn gprime_family(eps: f64, f_val: f64, theta: f64) -> GaussianPolyOvm {
    let g = eps / 2.0 - 2.0 * f_val;
    let h = 1.0 - eps - f_val;
    let i = 3.0 * eps / 2.0 - 1.0 + 2.0 * f_val;
    let lin = lin_kernel(1.0, 1.0, theta);
    let quad = quad_kernel(1.0, 1.0, theta.cos(), 0.0);
    let label = |diag: f64, amp: f64, shift: f64| {
        let ul = Poly2::constant_re(diag);
        let ur = lin.scale(Complex64::new(amp, 0.0));
        let lr = quad
            .scale(Complex64::new(amp, 0.0))
            .add(&Poly2::constant_re(shift));
        [[ul, ur], [ur.conj(), lr]]
    };
    GaussianPolyOvm {
        vars: VarCount::Two,
        labels: vec![label(1.0 - eps / 2.0, f_val, g), label(eps / 2.0, h, i)],
    }
}

/// The admissible parameter window of [`gprime_family`], empty below
/// `ε = 4/7`:
/// `max(0, 1 − 3ε/2) ≤ f ≤ min(ε/4, 1 − ε)` for `ε > ½`.
pub fn feasible_f_interval(eps: f64) -> Option<(f64, f64)> {
    if eps <= 0.5 || eps > 1.0 {
        return None;
    }
    let lo = (1.0 - 1.5 * eps).max(0.0);
    let hi = (eps / 4.0).min(1.0 - eps);
    if lo > hi + 1e-12 {
        return None;
    }
    Some((lo.min(hi), hi))
}

/// Builds the validated triple joint measurement of the modified ansatz.
///
/// Refuses `f` outside [`feasible_f_interval`] and re-checks positivity of
/// the constructed density.
pub fn improved_joint_gprime(eps: f64, f_val: f64, theta: f64) -> Result<GaussianPolyOvm> {
    check_unit("eps", eps)?;
    let (lo, hi) = feasible_f_interval(eps).ok_or_else(|| {
        Error::Infeasible(format!(
            "no admissible f at eps = {eps}; the window opens at eps = 4/7"
        ))
    })?;
    if f_val < lo - 1e-12 || f_val > hi + 1e-12 {
        return Err(Error::Infeasible(format!(
            "f = {f_val} outside the admissible window [{lo}, {hi}]"
        )));
    }
    let ovm = gprime_family(eps, f_val, theta);
    let pos = ovm.positivity(1e-9)?;
    if !pos.is_positive {
        return Err(Error::Infeasible(format!(
            "constructed density is not positive: witness {:?}",
            pos.witness
        )));
    }
    Ok(ovm)
}

/// Joint measurements of the two equal-noise pairs for `ε ≥ ½`:
/// number–quadrature (two labels, one variable) and the two quadratures
/// (one label, two variables).
pub fn improved_pair_joints(eps: f64, theta: f64) -> Result<(GaussianPolyOvm, GaussianPolyOvm)> {
    check_unit("eps", eps)?;
    if eps < 0.5 - 1e-12 {
        return Err(Error::Infeasible(format!(
            "the pair constructions need eps ≥ 1/2, got {eps}"
        )));
    }
    // Number–quadrature: the free parameter sits at the lower edge of its
    // window, which pins f̃ = ¼ at ε = ½ and decays to the product
    // construction at ε = 1.
    let f = (1.0 - 1.5 * eps).max(0.0);
    let g = eps / 2.0 - f;
    let h = 1.0 - eps - f;
    let i = eps - g;
    let phase = Complex64::from_polar(2f64.sqrt(), -theta);
    let one_var_label = |diag: f64, amp: f64, shift: f64| {
        let ul = Poly2::constant_re(diag);
        let mut ur = Poly2::zero();
        ur.c[1] = phase * amp;
        let mut lr = Poly2::constant_re(shift);
        lr.c[3] = Complex64::new(2.0 * amp, 0.0);
        [[ul, ur], [ur.conj(), lr]]
    };
    let g2 = GaussianPolyOvm {
        vars: VarCount::One,
        labels: vec![
            one_var_label(1.0 - eps / 2.0, f, g),
            one_var_label(eps / 2.0, h, i),
        ],
    };

    // Two quadratures: fully determined, k = 1 − ε and l = 2ε − 1.
    let k = 1.0 - eps;
    let l = 2.0 * eps - 1.0;
    let ul = Poly2::constant_re(1.0);
    let ur = lin_kernel(1.0, 1.0, theta).scale(Complex64::new(k, 0.0));
    let lr = quad_kernel(1.0, 1.0, theta.cos(), 0.0)
        .scale(Complex64::new(k, 0.0))
        .add(&Poly2::constant_re(l));
    let g1 = GaussianPolyOvm {
        vars: VarCount::Two,
        labels: vec![[[ul, ur], [ur.conj(), lr]]],
    };
    Ok((g2, g1))
}

/// Minimal number noise admitting a joint measurement with the canonical
/// phase: the solution of `f(ε) = 2`.
pub const PHASE_NUMBER_EPS_MIN: f64 = 1.0 - std::f64::consts::FRAC_1_SQRT_2;

/// The coupling budget `f(ε) = (1 − ε) / (√(ε/2)·√(1 − ε/2))`; the joint
/// construction exists iff `f(ε) ≤ 2`.
pub fn phase_number_f(eps: f64) -> f64 {
    if eps <= 0.0 {
        return f64::INFINITY;
    }
    (1.0 - eps) / ((eps / 2.0).sqrt() * (1.0 - eps / 2.0).sqrt())
}

/// Tabulates `(ε, f(ε))` for plotting.
pub fn phase_curve(eps_grid: &[f64]) -> Vec<(f64, f64)> {
    eps_grid
        .iter()
        .map(|&eps| (eps, phase_number_f(eps)))
        .collect()
}

/// The two-label joint density of projected number and noisy phase:
/// off-diagonals `c·w·e^{−iθ}` and `d·w·e^{−iθ}` with
/// `w = √(ε/2)·√(1 − ε/2)`, subject to `|c|, |d| ≤ 1` and `c + d = f(ε)`.
pub fn phase_number_joint(eps: f64, c: Complex64, d: Complex64) -> Result<TrigOvm> {
    check_unit("eps", eps)?;
    let budget = phase_number_f(eps);
    if budget > 2.0 + 1e-12 {
        return Err(Error::Infeasible(format!(
            "f(eps) = {budget} exceeds 2; no unit-disc pair (c, d) can reach it"
        )));
    }
    if c.norm() > 1.0 + 1e-9 || d.norm() > 1.0 + 1e-9 {
        return Err(Error::InvalidArgument(
            "c and d must lie in the unit disc".into(),
        ));
    }
    if (c + d - Complex64::new(budget, 0.0)).norm() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "c + d = {} must equal f(eps) = {budget}",
            c + d
        )));
    }
    let w = (eps / 2.0).sqrt() * (1.0 - eps / 2.0).sqrt();
    let label = |top: f64, bottom: f64, amp: Complex64| {
        [
            [TrigEntry::constant(top), TrigEntry::e_minus(amp * w)],
            [
                TrigEntry::e_plus(amp.conj() * w),
                TrigEntry::constant(bottom),
            ],
        ]
    };
    Ok(TrigOvm {
        labels: vec![
            label(1.0 - eps / 2.0, eps / 2.0, c),
            label(eps / 2.0, 1.0 - eps / 2.0, d),
        ],
    })
}

/// Bisects the boundary of a monotone predicate on `[lo, hi]` down to
/// `tol`; the predicate must be false at `lo` and true at `hi`.
pub fn bisect_threshold<F: Fn(f64) -> bool>(pred: F, lo: f64, hi: f64, tol: f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    debug_assert!(!pred(lo) && pred(hi));
    while hi - lo > tol {
        let mid = (lo + hi) / 2.0;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo + hi) / 2.0
}
