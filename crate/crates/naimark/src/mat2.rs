//! Dense 2×2 complex matrices.
//!
//! Everything downstream is qubit-sized or a small direct sum of qubit
//! blocks, so a fixed-size row-major matrix with closed-form spectral
//! routines covers all the linear algebra this crate needs.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// A 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2 {
    pub m: [[Complex64; 2]; 2],
}

impl Matrix2 {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self {
            m: [[a, b], [c, d]],
        }
    }

    pub fn zero() -> Self {
        Self::from_real(0.0, 0.0, 0.0, 0.0)
    }

    pub fn identity() -> Self {
        Self::from_real(1.0, 0.0, 0.0, 1.0)
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(
            Complex64::new(a, 0.0),
            Complex64::new(b, 0.0),
            Complex64::new(c, 0.0),
            Complex64::new(d, 0.0),
        )
    }

    pub fn diag(a: f64, d: f64) -> Self {
        Self::from_real(a, 0.0, 0.0, d)
    }

    /// σ₀ = identity.
    pub fn sigma0() -> Self {
        Self::identity()
    }

    /// σ₁, the real off-diagonal Pauli matrix.
    pub fn sigma1() -> Self {
        Self::from_real(0.0, 1.0, 1.0, 0.0)
    }

    /// σ₂, the imaginary off-diagonal Pauli matrix.
    pub fn sigma2() -> Self {
        Self::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        )
    }

    /// σ₃, the diagonal Pauli matrix.
    pub fn sigma3() -> Self {
        Self::from_real(1.0, 0.0, 0.0, -1.0)
    }

    /// Outer product of the Gram form `[[|c|², c̄d], [cd̄, |d|²]]`.
    ///
    /// This is `|v⟩⟨v|` for the row vector `v = (c, d)` of an isometry, the
    /// building block of every dilation in this crate.
    pub fn gram(c: Complex64, d: Complex64) -> Self {
        Self::new(
            Complex64::new(c.norm_sqr(), 0.0),
            c.conj() * d,
            c * d.conj(),
            Complex64::new(d.norm_sqr(), 0.0),
        )
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::new(
            self.m[0][0].conj(),
            self.m[1][0].conj(),
            self.m[0][1].conj(),
            self.m[1][1].conj(),
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        self.scale_c(Complex64::new(s, 0.0))
    }

    pub fn scale_c(&self, s: Complex64) -> Self {
        Self::new(
            self.m[0][0] * s,
            self.m[0][1] * s,
            self.m[1][0] * s,
            self.m[1][1] * s,
        )
    }

    /// Largest entrywise absolute value.
    pub fn max_abs(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise absolute difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    /// Deviation from Hermiticity, as the largest offending entry.
    pub fn hermiticity_residual(&self) -> f64 {
        self.max_abs_diff(&self.adjoint()) / 2.0
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// Eigenvalues of a Hermitian matrix, ascending. Closed form.
    pub fn eigenvalues_hermitian(&self) -> [f64; 2] {
        let t = self.trace().re;
        let half_diff = (self.m[0][0].re - self.m[1][1].re) / 2.0;
        let off = self.m[0][1].norm();
        let r = (half_diff * half_diff + off * off).sqrt();
        [t / 2.0 - r, t / 2.0 + r]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues_hermitian()[0]
    }

    /// Positive semidefinite within `tol` (assumes Hermitian input).
    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }

    /// Spectral decomposition of a Hermitian matrix: `(eigenvalues, eigenvectors)`
    /// with orthonormal eigenvector columns, eigenvalues ascending.
    pub fn eigen_hermitian(&self) -> ([f64; 2], [[Complex64; 2]; 2]) {
        let vals = self.eigenvalues_hermitian();
        let b = self.m[0][1];
        if b.norm() < 1e-300 {
            // Already diagonal.
            if self.m[0][0].re <= self.m[1][1].re {
                return (
                    vals,
                    [
                        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
                    ],
                );
            }
            return (
                vals,
                [
                    [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
                    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                ],
            );
        }
        let mut vecs = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (k, &lambda) in vals.iter().enumerate() {
            // (a - λ)x + b y = 0 → (x, y) ∝ (b, λ - a); fall back to the
            // other row when that vector degenerates.
            let v = [b, Complex64::new(lambda, 0.0) - self.m[0][0]];
            let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            vecs[k] = [v[0] / n, v[1] / n];
        }
        (vals, vecs)
    }

    /// Clips the spectrum of a Hermitian matrix into `[lo, hi]`.
    pub fn clip_spectrum(&self, lo: f64, hi: f64) -> Self {
        let (vals, vecs) = self.eigen_hermitian();
        let mut out = Self::zero();
        for k in 0..2 {
            let c = vals[k].clamp(lo, hi);
            if c != 0.0 {
                out = out + Self::gram(vecs[k][0].conj(), vecs[k][1].conj()).scale(c);
            }
        }
        out
    }

    /// Inverse square root of a positive definite Hermitian matrix.
    pub fn inv_sqrt_psd(&self) -> Self {
        let (vals, vecs) = self.eigen_hermitian();
        let mut out = Self::zero();
        for k in 0..2 {
            let c = 1.0 / vals[k].max(f64::MIN_POSITIVE).sqrt();
            out = out + Self::gram(vecs[k][0].conj(), vecs[k][1].conj()).scale(c);
        }
        out
    }

    pub fn commutator_norm(&self, other: &Self) -> f64 {
        (*self * *other - *other * *self).max_abs()
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, rhs: Matrix2) -> Matrix2 {
        let mut m = self.m;
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] += rhs.m[i][j];
            }
        }
        Matrix2 { m }
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, rhs: Matrix2) -> Matrix2 {
        let mut m = self.m;
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] -= rhs.m[i][j];
            }
        }
        Matrix2 { m }
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: Matrix2) -> Matrix2 {
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = self.m[i][0] * rhs.m[0][j] + self.m[i][1] * rhs.m[1][j];
            }
        }
        Matrix2 { m }
    }
}

impl Neg for Matrix2 {
    type Output = Matrix2;
    fn neg(self) -> Matrix2 {
        self.scale(-1.0)
    }
}
