//! Qubit effects in the Pauli basis.
//!
//! An effect `E` is stored as the real 4-vector `(e⁰, e¹, e², e³)` with
//! `E = ½(e⁰·1 + e·σ)`. Validity is the closed condition
//! `‖e‖ ≤ min(e⁰, 2 − e⁰)`, equivalent to both eigenvalues
//! `½(e⁰ ± ‖e‖)` lying in `[0, 1]`. The spectral split `E = E⁺ + E⁻`
//! into rank-≤1 parts is carried by the pairs `(c⁺, d⁺)`, `(c⁻, d⁻)`
//! that later become isometry rows of the minimal dilation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat2::Matrix2;
use crate::{ALG_TOL, RANK_TOL};

/// Pauli components `(e⁰, e)` of a qubit effect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliVector {
    pub e0: f64,
    pub e: [f64; 3],
}

impl PauliVector {
    pub fn new(e0: f64, e: [f64; 3]) -> Self {
        Self { e0, e }
    }

    /// Bloch-part norm ‖e‖.
    pub fn bloch_norm(&self) -> f64 {
        (self.e[0] * self.e[0] + self.e[1] * self.e[1] + self.e[2] * self.e[2]).sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.e[0] * other.e[0] + self.e[1] * other.e[1] + self.e[2] * other.e[2]
    }

    /// Validity as an effect: `‖e‖ ≤ min(e⁰, 2 − e⁰)` within `tol`.
    pub fn is_effect(&self, tol: f64) -> bool {
        self.e0.is_finite()
            && self.e.iter().all(|x| x.is_finite())
            && self.bloch_norm() <= self.e0.min(2.0 - self.e0) + tol
    }

    /// Unbiased means trace-one: `e⁰ = 1`.
    pub fn is_unbiased(&self, tol: f64) -> bool {
        (self.e0 - 1.0).abs() <= tol
    }

    /// The effect of the complementary outcome, `1 − E`.
    pub fn complement(&self) -> Self {
        Self::new(2.0 - self.e0, [-self.e[0], -self.e[1], -self.e[2]])
    }
}

/// `e^μ = tr(E σ_μ)` for μ = 0..3.
pub fn pauli_decompose(e: &Matrix2) -> Result<PauliVector> {
    let res = e.hermiticity_residual();
    if res > ALG_TOL {
        return Err(Error::NotHermitian(res));
    }
    Ok(PauliVector::new(
        (e.m[0][0] + e.m[1][1]).re,
        [
            (e.m[0][1] + e.m[1][0]).re,
            (e.m[0][1] * Complex64::new(0.0, 1.0) + e.m[1][0] * Complex64::new(0.0, -1.0)).re,
            (e.m[0][0] - e.m[1][1]).re,
        ],
    ))
}

/// `E = ½(e⁰·1 + e·σ)`; Hermitian by construction.
pub fn pauli_compose(v: &PauliVector) -> Matrix2 {
    Matrix2::new(
        Complex64::new((v.e0 + v.e[2]) / 2.0, 0.0),
        Complex64::new(v.e[0] / 2.0, -v.e[1] / 2.0),
        Complex64::new(v.e[0] / 2.0, v.e[1] / 2.0),
        Complex64::new((v.e0 - v.e[2]) / 2.0, 0.0),
    )
}

/// True iff `E` is Hermitian and `0 ≤ E ≤ 1` within `tol`.
pub fn is_effect(e: &Matrix2, tol: f64) -> bool {
    if !e.is_hermitian(tol) {
        return false;
    }
    match pauli_decompose(e) {
        Ok(v) => v.is_effect(tol),
        Err(_) => false,
    }
}

/// Rank of an effect in `{0, 1, 2}`: 0 iff `e⁰ ≤ tol`, 1 iff
/// `e⁰ = ‖e‖ ≠ 0` within `tol`, else 2.
pub fn effect_rank(e: &Matrix2, tol: f64) -> Result<u8> {
    let v = pauli_decompose(e)?;
    if !v.is_effect(tol.max(ALG_TOL)) {
        return Err(Error::NotAnEffect(format!(
            "e0 = {}, |e| = {}",
            v.e0,
            v.bloch_norm()
        )));
    }
    Ok(pauli_rank(&v, tol))
}

pub(crate) fn pauli_rank(v: &PauliVector, tol: f64) -> u8 {
    if v.e0 <= tol {
        0
    } else if (v.e0 - v.bloch_norm()).abs() <= tol {
        1
    } else {
        2
    }
}

/// `sgn x = 1` for `x ≥ 0`, `−1` otherwise (ties break positive).
fn sgn(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Spectral split `E = E⁺ + E⁻` together with the defining `(c±, d±)` pairs.
///
/// Each retained pair lies in the canonical domain `(ℝ₊ × ℂ) ∪ ({0} × ℝ₊)`
/// and the parts are the Gram matrices `E± = [[|c±|², c̄±d±], [c±d̄±, |d±|²]]`.
#[derive(Debug, Clone, Copy)]
pub struct SpectralSplit {
    pub e_plus: Matrix2,
    pub e_minus: Matrix2,
    pub c_plus: Complex64,
    pub d_plus: Complex64,
    pub c_minus: Complex64,
    pub d_minus: Complex64,
}

impl SpectralSplit {
    /// Residual of `E⁺ + E⁻ = E`.
    pub fn reconstruction_residual(&self, e: &Matrix2) -> f64 {
        (self.e_plus + self.e_minus).max_abs_diff(e)
    }

    /// Residual of the orthogonality relation `c̄⁺c⁻ + d̄⁺d⁻ = 0`.
    pub fn orthogonality_residual(&self) -> f64 {
        (self.c_plus.conj() * self.c_minus + self.d_plus.conj() * self.d_minus).norm()
    }
}

/// Computes the spectral split of an effect.
///
/// The generic formula divides by `‖e‖ ± e³` and `‖e‖`, so the axis-aligned
/// branch takes over when `|‖e‖ − |e³|| ≤ RANK_TOL` (which includes the
/// `‖e‖ = 0` case, where the split is the non-unique `E± = (e⁰/4)(1 ± σ₃)`).
pub fn spectral_split(e: &Matrix2, tol: f64) -> Result<SpectralSplit> {
    let v = pauli_decompose(e)?;
    if !v.is_effect(tol.max(ALG_TOL)) {
        return Err(Error::NotAnEffect(format!(
            "e0 = {}, |e| = {}",
            v.e0,
            v.bloch_norm()
        )));
    }
    let n = v.bloch_norm();
    let e3 = v.e[2];

    let (c_plus, d_plus, c_minus, d_minus);
    if (n - e3.abs()).abs() <= RANK_TOL {
        // Degenerate branch: e¹ = e² = 0 up to tolerance.
        let s = sgn(e3);
        let wp = ((v.e0 + e3.abs()).max(0.0) / 2.0).sqrt();
        let wm = ((v.e0 - e3.abs()).max(0.0) / 2.0).sqrt();
        c_plus = Complex64::new((1.0 + s) / 2.0 * wp, 0.0);
        d_plus = Complex64::new((1.0 - s) / 2.0 * wp, 0.0);
        c_minus = Complex64::new((1.0 - s) / 2.0 * wm, 0.0);
        d_minus = Complex64::new((1.0 + s) / 2.0 * wm, 0.0);
    } else {
        let off = Complex64::new(v.e[0], -v.e[1]);
        let cp = ((v.e0 + n).max(0.0) * (n + e3) / (4.0 * n)).sqrt();
        let cm = ((v.e0 - n).max(0.0) * (n - e3) / (4.0 * n)).sqrt();
        let dp = off * ((v.e0 + n).max(0.0) / (4.0 * n * (n + e3))).sqrt();
        let dm = -off * ((v.e0 - n).max(0.0) / (4.0 * n * (n - e3))).sqrt();
        c_plus = Complex64::new(cp, 0.0);
        d_plus = dp;
        c_minus = Complex64::new(cm, 0.0);
        d_minus = dm;
    }

    Ok(SpectralSplit {
        e_plus: Matrix2::gram(c_plus, d_plus),
        e_minus: Matrix2::gram(c_minus, d_minus),
        c_plus,
        d_plus,
        c_minus,
        d_minus,
    })
}

/// Removes the free phase from `(c, d)` so that `c > 0`, or `c = 0` and
/// `d > 0`; the Gram matrix is unchanged.
pub fn canonicalize_cd(c: Complex64, d: Complex64) -> Result<(Complex64, Complex64)> {
    let nc = c.norm();
    let nd = d.norm();
    if nc == 0.0 && nd == 0.0 {
        return Err(Error::InvalidArgument(
            "(c, d) = (0, 0) has no phase".into(),
        ));
    }
    if nc > 0.0 {
        let phase = c.conj() / nc;
        Ok((Complex64::new(nc, 0.0), d * phase))
    } else {
        Ok((Complex64::new(0.0, 0.0), Complex64::new(nd, 0.0)))
    }
}

/// True iff the pair lies in `(ℝ₊ × ℂ) ∪ ({0} × ℝ₊)` within `tol`
/// (zero pairs are accepted).
pub fn is_canonical_cd(c: Complex64, d: Complex64, tol: f64) -> bool {
    if c.norm() <= tol {
        d.im.abs() <= tol && d.re >= -tol
    } else {
        c.im.abs() <= tol && c.re > 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SQRT_15: f64 = 3.872983346207417;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn decompose_identity() {
        let v = pauli_decompose(&Matrix2::identity()).unwrap();
        assert!(approx(v.e0, 2.0, 1e-15));
        assert!(v.bloch_norm() < 1e-15);
    }

    #[test]
    fn decompose_noisy_spin() {
        // ½(1 + σ₁/√2) → (1, (1/√2, 0, 0))
        let e = (Matrix2::identity() + Matrix2::sigma1().scale(1.0 / 2f64.sqrt())).scale(0.5);
        let v = pauli_decompose(&e).unwrap();
        assert!(approx(v.e0, 1.0, 1e-15));
        assert!(approx(v.e[0], 1.0 / 2f64.sqrt(), 1e-15));
        assert!(v.e[1].abs() < 1e-15 && v.e[2].abs() < 1e-15);
    }

    #[test]
    fn decompose_projector() {
        let v = pauli_decompose(&Matrix2::diag(1.0, 0.0)).unwrap();
        assert_eq!((v.e0, v.e), (1.0, [0.0, 0.0, 1.0]));
    }

    #[test]
    fn decompose_rejects_non_hermitian() {
        let m = Matrix2::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.1, 0.0),
            Complex64::new(0.0, 0.0),
        );
        assert!(pauli_decompose(&m).is_err());
    }

    #[test]
    fn compose_cases() {
        assert!(
            pauli_compose(&PauliVector::new(2.0, [0.0; 3])).max_abs_diff(&Matrix2::identity())
                < 1e-15
        );
        let a = 0.3;
        assert!(
            pauli_compose(&PauliVector::new(1.0, [0.0, 0.0, a]))
                .max_abs_diff(&Matrix2::diag((1.0 + a) / 2.0, (1.0 - a) / 2.0))
                < 1e-15
        );
        // The biased counterexample effect (√15/4)·diag(1, 0).
        let s = SQRT_15 / 4.0;
        assert!(
            pauli_compose(&PauliVector::new(s, [0.0, 0.0, s])).max_abs_diff(&Matrix2::diag(s, 0.0))
                < 1e-15
        );
    }

    #[test]
    fn is_effect_cases() {
        let half_up = (Matrix2::identity() + Matrix2::sigma3()).scale(0.5);
        assert!(is_effect(&half_up, ALG_TOL));
        assert!(!is_effect(&Matrix2::identity().scale(2.0), ALG_TOL));
        for a in [-1.0, -0.5, 0.0, 0.33, 0.999, 1.0] {
            let e = (Matrix2::identity() + Matrix2::sigma3().scale(a)).scale(0.5);
            assert!(is_effect(&e, ALG_TOL), "a = {a}");
        }
        let e = (Matrix2::identity() + Matrix2::sigma3().scale(1.001)).scale(0.5);
        assert!(!is_effect(&e, ALG_TOL));
    }

    #[test]
    fn rank_cases() {
        assert_eq!(effect_rank(&Matrix2::zero(), RANK_TOL).unwrap(), 0);
        let s = SQRT_15 / 4.0;
        assert_eq!(effect_rank(&Matrix2::diag(s, 0.0), RANK_TOL).unwrap(), 1);
        for lambda in [0.2, 0.5, 0.9] {
            let e = (Matrix2::identity() + Matrix2::sigma3().scale(lambda)).scale(1.0 / 3.0);
            assert_eq!(effect_rank(&e, RANK_TOL).unwrap(), 2, "λ = {lambda}");
        }
    }

    #[test]
    fn rank_matches_eigenvalue_count() {
        let cases = [
            PauliVector::new(1.0, [0.3, -0.2, 0.4]),
            PauliVector::new(0.8, [0.8, 0.0, 0.0]),
            PauliVector::new(1.4, [0.0, 0.0, 0.6]),
        ];
        for v in cases {
            let e = pauli_compose(&v);
            let count = e
                .eigenvalues_hermitian()
                .iter()
                .filter(|&&x| x > RANK_TOL)
                .count() as u8;
            assert_eq!(effect_rank(&e, RANK_TOL).unwrap(), count);
        }
    }

    #[test]
    fn split_unbiased_axis() {
        // E = ½(1 + aσ₃): c⁺ = √((1+a)/2), d⁺ = 0, c⁻ = 0, d⁻ = √((1−a)/2).
        let a = 0.37;
        let e = (Matrix2::identity() + Matrix2::sigma3().scale(a)).scale(0.5);
        let s = spectral_split(&e, ALG_TOL).unwrap();
        assert!(approx(s.c_plus.re, ((1.0 + a) / 2.0).sqrt(), 1e-15));
        assert!(s.d_plus.norm() < 1e-15 && s.c_minus.norm() < 1e-15);
        assert!(approx(s.d_minus.re, ((1.0 - a) / 2.0).sqrt(), 1e-15));
    }

    #[test]
    fn split_trivial_effect() {
        // E = (e⁰/2)·1 → E± = (e⁰/4)(1 ± σ₃).
        let e0 = 0.6;
        let e = Matrix2::identity().scale(e0 / 2.0);
        let s = spectral_split(&e, ALG_TOL).unwrap();
        assert!(s.e_plus.max_abs_diff(&Matrix2::diag(e0 / 2.0, 0.0)) < 1e-15);
        assert!(s.e_minus.max_abs_diff(&Matrix2::diag(0.0, e0 / 2.0)) < 1e-15);
    }

    /// Independent oracle: direct 2×2 eigendecomposition.
    fn split_oracle(e: &Matrix2) -> (Matrix2, Matrix2) {
        let (vals, vecs) = e.eigen_hermitian();
        let proj = |k: usize| Matrix2::gram(vecs[k][0].conj(), vecs[k][1].conj()).scale(vals[k]);
        (proj(1), proj(0)) // plus part carries the larger eigenvalue
    }

    #[test]
    fn split_generic_matches_eigendecomposition() {
        let cases = [
            PauliVector::new(1.0, [0.31, -0.22, 0.18]),
            PauliVector::new(0.9, [0.1, 0.4, -0.3]),
            PauliVector::new(1.3, [-0.25, 0.33, 0.41]),
        ];
        for v in cases {
            let e = pauli_compose(&v);
            let s = spectral_split(&e, ALG_TOL).unwrap();
            assert!(s.reconstruction_residual(&e) <= 1e-12);
            assert!(s.orthogonality_residual() <= 1e-12);
            let (op, om) = split_oracle(&e);
            assert!(s.e_plus.max_abs_diff(&op) <= 1e-12);
            assert!(s.e_minus.max_abs_diff(&om) <= 1e-12);
            assert!(is_canonical_cd(s.c_plus, s.d_plus, 1e-12));
            assert!(is_canonical_cd(s.c_minus, s.d_minus, 1e-12));
        }
    }

    #[test]
    fn canonicalize_examples() {
        let (c, d) = canonicalize_cd(Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)).unwrap();
        assert!((c - Complex64::new(1.0, 0.0)).norm() < 1e-15 && d.norm() < 1e-15);
        let (c, d) = canonicalize_cd(Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)).unwrap();
        assert!(c.norm() < 1e-15 && (d - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(canonicalize_cd(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)).is_err());
    }

    fn effect_strategy() -> impl Strategy<Value = PauliVector> {
        // Uniform direction scaled into the valid cone.
        (
            0.0..2.0f64,
            -1.0..1.0f64,
            -1.0..1.0f64,
            -1.0..1.0f64,
            0.0..1.0f64,
        )
            .prop_filter_map("nonzero direction", |(e0, x, y, z, r)| {
                let n = (x * x + y * y + z * z).sqrt();
                if n < 1e-3 {
                    return None;
                }
                let cap = e0.min(2.0 - e0) * r;
                Some(PauliVector::new(
                    e0,
                    [x / n * cap, y / n * cap, z / n * cap],
                ))
            })
    }

    proptest! {
        #[test]
        fn pauli_round_trip(v in effect_strategy()) {
            let e = pauli_compose(&v);
            let back = pauli_decompose(&e).unwrap();
            prop_assert!(approx(back.e0, v.e0, 1e-12));
            for k in 0..3 {
                prop_assert!(approx(back.e[k], v.e[k], 1e-12));
            }
        }

        #[test]
        fn split_invariants(v in effect_strategy()) {
            let e = pauli_compose(&v);
            let s = spectral_split(&e, ALG_TOL).unwrap();
            prop_assert!(s.reconstruction_residual(&e) <= 1e-12);
            prop_assert!(s.orthogonality_residual() <= 1e-12);
            prop_assert!(s.e_plus.is_psd(1e-12) && s.e_minus.is_psd(1e-12));
            prop_assert!(is_canonical_cd(s.c_plus, s.d_plus, 1e-12));
            prop_assert!(is_canonical_cd(s.c_minus, s.d_minus, 1e-12));
        }

        #[test]
        fn canonicalize_preserves_gram(
            r in 0.01..1.0f64,
            phi in -3.14..3.14f64,
            zr in -1.0..1.0f64,
            zi in -1.0..1.0f64,
        ) {
            let c = Complex64::from_polar(r, phi);
            let d = Complex64::new(zr, zi);
            let (cc, dd) = canonicalize_cd(c, d).unwrap();
            prop_assert!(cc.im.abs() < 1e-15 && cc.re > 0.0);
            prop_assert!(Matrix2::gram(cc, dd).max_abs_diff(&Matrix2::gram(c, d)) < 1e-12);
        }
    }
}
