//! Bivariate polynomials of low degree with complex coefficients, plus the
//! closed-form global-minimum analysis of real quadratics over ℝ².
//!
//! Operator densities store one `Poly2` per matrix entry; determinants are
//! formed exactly as `Poly4` products and must collapse back to degree ≤ 2
//! for the positivity analysis to apply.

use num_complex::Complex64;

/// Monomial order: 1, x, y, x², xy, y².
pub const MONOMIALS2: [(u8, u8); 6] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];

/// Monomial order of quartics: total degree ≤ 4, graded.
pub const MONOMIALS4: [(u8, u8); 15] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
    (4, 0),
    (3, 1),
    (2, 2),
    (1, 3),
    (0, 4),
];

fn index4(i: u8, j: u8) -> usize {
    MONOMIALS4
        .iter()
        .position(|&(a, b)| (a, b) == (i, j))
        .expect("total degree at most 4")
}

/// Complex polynomial of total degree ≤ 2 in `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Poly2 {
    pub c: [Complex64; 6],
}

impl Poly2 {
    pub fn zero() -> Self {
        Self {
            c: [Complex64::new(0.0, 0.0); 6],
        }
    }

    pub fn constant(v: Complex64) -> Self {
        let mut p = Self::zero();
        p.c[0] = v;
        p
    }

    pub fn constant_re(v: f64) -> Self {
        Self::constant(Complex64::new(v, 0.0))
    }

    /// Builder with coefficients in the order 1, x, y, x², xy, y².
    pub fn from_coeffs(c: [Complex64; 6]) -> Self {
        Self { c }
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        self.c[0]
            + self.c[1] * x
            + self.c[2] * y
            + self.c[3] * (x * x)
            + self.c[4] * (x * y)
            + self.c[5] * (y * y)
    }

    /// Coefficientwise complex conjugate; equals pointwise conjugation for
    /// real arguments.
    pub fn conj(&self) -> Self {
        let mut c = self.c;
        for z in &mut c {
            *z = z.conj();
        }
        Self { c }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut c = self.c;
        for z in &mut c {
            *z *= s;
        }
        Self { c }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut c = self.c;
        for (z, w) in c.iter_mut().zip(&other.c) {
            *z += w;
        }
        Self { c }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut c = self.c;
        for (z, w) in c.iter_mut().zip(&other.c) {
            *z -= w;
        }
        Self { c }
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.c.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.c.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn mul(&self, other: &Self) -> Poly4 {
        let mut c = [Complex64::new(0.0, 0.0); 15];
        for (k1, &(i1, j1)) in MONOMIALS2.iter().enumerate() {
            if self.c[k1].norm_sqr() == 0.0 {
                continue;
            }
            for (k2, &(i2, j2)) in MONOMIALS2.iter().enumerate() {
                c[index4(i1 + i2, j1 + j2)] += self.c[k1] * other.c[k2];
            }
        }
        Poly4 { c }
    }

    /// Gaussian expectation against `e^{−x²−y²} dx dy / π`:
    /// `⟨1⟩ = 1, ⟨x⟩ = ⟨y⟩ = ⟨xy⟩ = 0, ⟨x²⟩ = ⟨y²⟩ = ½`.
    pub fn gaussian_mean(&self) -> Complex64 {
        self.c[0] + (self.c[3] + self.c[5]) * 0.5
    }

    /// Partial Gaussian integral over `y`, leaving a polynomial in `x`.
    pub fn integrate_out_y(&self) -> Poly2 {
        let mut c = [Complex64::new(0.0, 0.0); 6];
        c[0] = self.c[0] + self.c[5] * 0.5;
        c[1] = self.c[1];
        c[3] = self.c[3];
        Poly2 { c }
    }

    /// Partial Gaussian integral over `x`; the survivor is relabeled to the
    /// first variable slot.
    pub fn integrate_out_x(&self) -> Poly2 {
        let mut c = [Complex64::new(0.0, 0.0); 6];
        c[0] = self.c[0] + self.c[3] * 0.5;
        c[1] = self.c[2];
        c[3] = self.c[5];
        Poly2 { c }
    }

    /// Real view, failing when any coefficient has an imaginary part above
    /// `tol`.
    pub fn to_real(&self, tol: f64) -> Option<RealQuad> {
        if self.max_imag() > tol {
            return None;
        }
        Some(RealQuad {
            c: [
                self.c[0].re,
                self.c[1].re,
                self.c[2].re,
                self.c[3].re,
                self.c[4].re,
                self.c[5].re,
            ],
        })
    }
}

/// Complex polynomial of total degree ≤ 4, used only transiently for
/// determinants.
#[derive(Debug, Clone, Copy)]
pub struct Poly4 {
    pub c: [Complex64; 15],
}

impl Poly4 {
    pub fn sub(&self, other: &Self) -> Self {
        let mut c = self.c;
        for (z, w) in c.iter_mut().zip(&other.c) {
            *z -= w;
        }
        Self { c }
    }

    /// Collapses to degree ≤ 2, failing when any higher coefficient exceeds
    /// `tol`.
    pub fn to_quadratic(&self, tol: f64) -> Option<Poly2> {
        if self.c[6..].iter().any(|z| z.norm() > tol) {
            return None;
        }
        let mut c = [Complex64::new(0.0, 0.0); 6];
        c.copy_from_slice(&self.c[..6]);
        Some(Poly2 { c })
    }
}

/// Real quadratic `a₀₀ + a₁₀x + a₀₁y + a₂₀x² + a₁₁xy + a₀₂y²`.
#[derive(Debug, Clone, Copy)]
pub struct RealQuad {
    pub c: [f64; 6],
}

/// Outcome of the global-minimum analysis of a real quadratic.
#[derive(Debug, Clone, Copy)]
pub enum QuadInfimum {
    /// Attained (or approached on an affine subspace) minimum.
    Finite { value: f64, at: (f64, f64) },
    /// Unbounded below along the given direction.
    NegInfinite { direction: (f64, f64) },
}

impl RealQuad {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.c[0]
            + self.c[1] * x
            + self.c[2] * y
            + self.c[3] * x * x
            + self.c[4] * x * y
            + self.c[5] * y * y
    }

    /// Global infimum over ℝ² by quadratic-form classification: indefinite
    /// directions give −∞, a semidefinite kernel with nonzero slope gives
    /// −∞, otherwise the stationary value on the positive subspace.
    pub fn infimum(&self, tol: f64) -> QuadInfimum {
        let q11 = self.c[3];
        let q22 = self.c[5];
        let q12 = self.c[4] / 2.0;
        let b = (self.c[1], self.c[2]);

        // Eigensystem of the symmetric quadratic-form matrix.
        let half_tr = (q11 + q22) / 2.0;
        let disc = (((q11 - q22) / 2.0).powi(2) + q12 * q12).sqrt();
        let l1 = half_tr - disc;
        let l2 = half_tr + disc;
        let (v1, v2) = if q12.abs() < 1e-300 {
            if q11 <= q22 {
                ((1.0, 0.0), (0.0, 1.0))
            } else {
                ((0.0, 1.0), (1.0, 0.0))
            }
        } else {
            let u = (q12, l1 - q11);
            let n = (u.0 * u.0 + u.1 * u.1).sqrt();
            let v1 = (u.0 / n, u.1 / n);
            ((v1.0, v1.1), (-v1.1, v1.0))
        };

        let dot = |a: (f64, f64), c: (f64, f64)| a.0 * c.0 + a.1 * c.1;

        if l1 < -tol {
            let s = if dot(b, v1) > 0.0 { -1.0 } else { 1.0 };
            return QuadInfimum::NegInfinite {
                direction: (s * v1.0, s * v1.1),
            };
        }
        if l1 > tol {
            // Positive definite: stationary point solves 2Qz = −b.
            let det = q11 * q22 - q12 * q12;
            let z = (
                -(q22 * b.0 - q12 * b.1) / (2.0 * det),
                -(q11 * b.1 - q12 * b.0) / (2.0 * det),
            );
            return QuadInfimum::Finite {
                value: self.c[0] + (b.0 * z.0 + b.1 * z.1) / 2.0,
                at: z,
            };
        }
        // Kernel direction v1.
        let slope1 = dot(b, v1);
        if slope1.abs() > tol {
            let s = -slope1.signum();
            return QuadInfimum::NegInfinite {
                direction: (s * v1.0, s * v1.1),
            };
        }
        if l2 > tol {
            let bs = dot(b, v2);
            let t = -bs / (2.0 * l2);
            return QuadInfimum::Finite {
                value: self.c[0] - bs * bs / (4.0 * l2),
                at: (t * v2.0, t * v2.1),
            };
        }
        let slope2 = dot(b, v2);
        if slope2.abs() > tol {
            let s = -slope2.signum();
            return QuadInfimum::NegInfinite {
                direction: (s * v2.0, s * v2.1),
            };
        }
        QuadInfimum::Finite {
            value: self.c[0],
            at: (0.0, 0.0),
        }
    }

    /// True iff the quadratic stays above `−tol` everywhere.
    pub fn is_nonnegative(&self, tol: f64) -> bool {
        matches!(self.infimum(tol), QuadInfimum::Finite { value, .. } if value >= -tol)
    }

    /// A point where the quadratic dips below `−tol`, if any. Canonical
    /// probe points are tried first so witnesses stay human-readable.
    pub fn negativity_witness(&self, tol: f64) -> Option<(f64, f64)> {
        const PROBES: [(f64, f64); 9] = [
            (1.0, 0.0),
            (0.0, 1.0),
            (0.0, 0.0),
            (1.0, 1.0),
            (1.0, -1.0),
            (-1.0, 0.0),
            (0.0, -1.0),
            (-1.0, 1.0),
            (-1.0, -1.0),
        ];
        for (x, y) in PROBES {
            if self.eval(x, y) < -tol {
                return Some((x, y));
            }
        }
        match self.infimum(tol) {
            QuadInfimum::Finite { value, at } => (value < -tol).then_some(at),
            QuadInfimum::NegInfinite { direction } => {
                let mut t = 1.0;
                for _ in 0..200 {
                    let p = (t * direction.0, t * direction.1);
                    if self.eval(p.0, p.1) < -tol {
                        return Some(p);
                    }
                    t *= 2.0;
                }
                None
            }
        }
    }
}
