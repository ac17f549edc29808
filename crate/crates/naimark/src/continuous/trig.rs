//! Operator densities over the circle with first-order Fourier entries,
//! integrated against `dθ/2π`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat2::Matrix2;

/// Entry of the form `c₀ + c₋ e^{−iθ} + c₊ e^{iθ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigEntry {
    pub c0: Complex64,
    pub cm: Complex64,
    pub cp: Complex64,
}

impl TrigEntry {
    pub fn zero() -> Self {
        Self {
            c0: Complex64::new(0.0, 0.0),
            cm: Complex64::new(0.0, 0.0),
            cp: Complex64::new(0.0, 0.0),
        }
    }

    pub fn constant(v: f64) -> Self {
        Self {
            c0: Complex64::new(v, 0.0),
            ..Self::zero()
        }
    }

    /// `a·e^{−iθ}` term only.
    pub fn e_minus(a: Complex64) -> Self {
        Self {
            cm: a,
            ..Self::zero()
        }
    }

    /// `a·e^{iθ}` term only.
    pub fn e_plus(a: Complex64) -> Self {
        Self {
            cp: a,
            ..Self::zero()
        }
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        let em = Complex64::from_polar(1.0, -theta);
        self.c0 + self.cm * em + self.cp * em.conj()
    }

    /// Pointwise complex conjugate of the function.
    pub fn conj(&self) -> Self {
        Self {
            c0: self.c0.conj(),
            cm: self.cp.conj(),
            cp: self.cm.conj(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            c0: self.c0 + other.c0,
            cm: self.cm + other.cm,
            cp: self.cp + other.cp,
        }
    }

    /// `∫ (·) dθ/2π`: only the constant Fourier mode survives.
    pub fn mean(&self) -> Complex64 {
        self.c0
    }

    /// Product, a second-order Fourier polynomial.
    fn mul(&self, other: &Self) -> [Complex64; 5] {
        // Order: e^{−2iθ}, e^{−iθ}, 1, e^{iθ}, e^{2iθ}.
        [
            self.cm * other.cm,
            self.c0 * other.cm + self.cm * other.c0,
            self.c0 * other.c0 + self.cm * other.cp + self.cp * other.cm,
            self.c0 * other.cp + self.cp * other.c0,
            self.cp * other.cp,
        ]
    }
}

/// A labeled family of 2×2 trig densities against `dθ/2π`.
#[derive(Debug, Clone)]
pub struct TrigOvm {
    pub labels: Vec<[[TrigEntry; 2]; 2]>,
}

impl TrigOvm {
    /// Largest deviation from pointwise Hermiticity over all labels.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut res: f64 = 0.0;
        for m in &self.labels {
            let lower = m[0][1].conj();
            res = res
                .max((m[1][0].c0 - lower.c0).norm())
                .max((m[1][0].cm - lower.cm).norm())
                .max((m[1][0].cp - lower.cp).norm());
            for k in 0..2 {
                let d = m[k][k];
                res = res.max(d.c0.im.abs()).max((d.cp - d.cm.conj()).norm());
            }
        }
        res
    }

    /// `∫ dθ/2π` of one label.
    pub fn label_total(&self, l: usize) -> Matrix2 {
        let m = &self.labels[l];
        Matrix2::new(
            m[0][0].mean(),
            m[0][1].mean(),
            m[1][0].mean(),
            m[1][1].mean(),
        )
    }

    /// Total integral over labels and angle.
    pub fn total(&self) -> Matrix2 {
        (0..self.labels.len())
            .map(|l| self.label_total(l))
            .fold(Matrix2::zero(), |acc, m| acc + m)
    }

    pub fn normalization_residual(&self) -> f64 {
        self.total().max_abs_diff(&Matrix2::identity())
    }

    /// Entrywise label sum, the angle-resolved marginal density.
    pub fn sum_labels(&self) -> [[TrigEntry; 2]; 2] {
        let mut out = [[TrigEntry::zero(); 2]; 2];
        for m in &self.labels {
            for i in 0..2 {
                for j in 0..2 {
                    out[i][j] = out[i][j].add(&m[i][j]);
                }
            }
        }
        out
    }

    /// Density matrix at a fixed angle.
    pub fn at(&self, l: usize, theta: f64) -> Matrix2 {
        let m = &self.labels[l];
        Matrix2::new(
            m[0][0].eval(theta),
            m[0][1].eval(theta),
            m[1][0].eval(theta),
            m[1][1].eval(theta),
        )
    }

    /// Pointwise positivity for all angles and labels.
    ///
    /// Diagonal entries are first-order Fourier with exact minima; the
    /// determinant must be constant in θ (all the families built here are),
    /// otherwise the density is reported unsupported.
    pub fn is_positive(&self, tol: f64) -> Result<bool> {
        let herm = self.hermiticity_residual();
        if herm > tol {
            return Err(Error::UnsupportedDensity(format!(
                "density is not pointwise Hermitian (residual {herm:.3e})"
            )));
        }
        for (l, m) in self.labels.iter().enumerate() {
            for k in 0..2 {
                let d = m[k][k];
                if d.c0.re - 2.0 * d.cm.norm() < -tol {
                    return Ok(false);
                }
            }
            // det = UL·LR − UR·LL as Fourier coefficients.
            let ul_lr = m[0][0].mul(&m[1][1]);
            let ur_ll = m[0][1].mul(&m[1][0]);
            let det: Vec<Complex64> = ul_lr.iter().zip(&ur_ll).map(|(a, b)| a - b).collect();
            for (k, z) in det.iter().enumerate() {
                if k != 2 && z.norm() > tol {
                    return Err(Error::UnsupportedDensity(format!(
                        "label {l}: determinant oscillates in θ (coefficient {:.3e})",
                        z.norm()
                    )));
                }
            }
            if det[2].im.abs() > tol {
                return Err(Error::UnsupportedDensity(
                    "determinant has an imaginary part".into(),
                ));
            }
            if det[2].re < -tol {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
