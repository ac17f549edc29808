//! Discrete qubit POVMs: validation, multiplicity vectors, uniform-noise
//! mixing, and the canonical correspondence between rank-1 POVMs and
//! orthonormal coefficient vectors.

use num_complex::Complex64;

use crate::effect::{
    canonicalize_cd, is_canonical_cd, pauli_decompose, pauli_rank, spectral_split, PauliVector,
};
use crate::error::{Error, Result};
use crate::mat2::Matrix2;
use crate::{ALG_TOL, RANK_TOL};

/// An ordered list of effects summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePovm {
    pub effects: Vec<Matrix2>,
}

impl DiscretePovm {
    pub fn new(effects: Vec<Matrix2>) -> Self {
        Self { effects }
    }

    /// Builds from Pauli vectors.
    pub fn from_pauli(vectors: &[PauliVector]) -> Self {
        Self::new(vectors.iter().map(crate::effect::pauli_compose).collect())
    }

    /// Binary POVM `(E, 1 − E)` determined by its first effect.
    pub fn binary(e: &Matrix2) -> Self {
        Self::new(vec![*e, Matrix2::identity() - *e])
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn pauli_vectors(&self) -> Result<Vec<PauliVector>> {
        self.effects.iter().map(pauli_decompose).collect()
    }

    /// Residual of the normalization `Σᵢ Eᵢ = 1`.
    pub fn normalization_residual(&self) -> f64 {
        let sum = self.effects.iter().fold(Matrix2::zero(), |acc, e| acc + *e);
        sum.max_abs_diff(&Matrix2::identity())
    }

    /// Mixes each effect with uniform noise: `Eᵢ ↦ λEᵢ + (1 − λ)·1/N`.
    pub fn uniform_noise_mix(&self, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::OutOfRange {
                name: "lambda",
                value: lambda,
                range: "[0, 1]",
            });
        }
        let n = self.len() as f64;
        let noise = Matrix2::identity().scale((1.0 - lambda) / n);
        Ok(Self::new(
            self.effects
                .iter()
                .map(|e| e.scale(lambda) + noise)
                .collect(),
        ))
    }
}

/// Per-outcome effect ranks; `‖m‖₁` is the minimal dilation dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityVector(pub Vec<u8>);

impl MultiplicityVector {
    pub fn l1(&self) -> usize {
        self.0.iter().map(|&m| m as usize).sum()
    }
}

/// Checks effect validity and normalization; returns the multiplicity vector.
///
/// Zero effects are rejected unless `allow_zero` (the zero-padding
/// convention used when embedding short POVMs into a fixed outcome count).
pub fn validate_povm(p: &DiscretePovm, tol: f64, allow_zero: bool) -> Result<MultiplicityVector> {
    if p.is_empty() {
        return Err(Error::InvalidPovm("no effects".into()));
    }
    let mut ranks = Vec::with_capacity(p.len());
    for (i, e) in p.effects.iter().enumerate() {
        let v =
            pauli_decompose(e).map_err(|err| Error::InvalidPovm(format!("effect {i}: {err}")))?;
        if !v.is_effect(tol) {
            return Err(Error::InvalidPovm(format!(
                "effect {i} is not a valid effect (e0 = {}, |e| = {})",
                v.e0,
                v.bloch_norm()
            )));
        }
        let r = pauli_rank(&v, RANK_TOL);
        if r == 0 && !allow_zero {
            return Err(Error::InvalidPovm(format!("effect {i} is zero")));
        }
        ranks.push(r);
    }
    let res = p.normalization_residual();
    if res > tol {
        return Err(Error::InvalidPovm(format!(
            "effects do not sum to the identity (residual {res:.3e})"
        )));
    }
    Ok(MultiplicityVector(ranks))
}

/// Orthonormal coefficient vectors `c, d ∈ ℂᴷ` with every pair in the
/// canonical domain; the rank-1 POVM side of the bijection.
#[derive(Debug, Clone, PartialEq)]
pub struct CdVectors {
    pub c: Vec<Complex64>,
    pub d: Vec<Complex64>,
}

impl CdVectors {
    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// Largest deviation from `‖c‖ = ‖d‖ = 1`, `⟨c|d⟩ = 0`.
    pub fn orthonormality_residual(&self) -> f64 {
        let nc: f64 = self.c.iter().map(|z| z.norm_sqr()).sum();
        let nd: f64 = self.d.iter().map(|z| z.norm_sqr()).sum();
        let ip: Complex64 = self.c.iter().zip(&self.d).map(|(a, b)| a.conj() * b).sum();
        (nc - 1.0).abs().max((nd - 1.0).abs()).max(ip.norm())
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        if self.c.len() != self.d.len() {
            return Err(Error::DimensionMismatch(format!(
                "c has {} entries, d has {}",
                self.c.len(),
                self.d.len()
            )));
        }
        let res = self.orthonormality_residual();
        if res > tol {
            return Err(Error::InvalidArgument(format!(
                "vectors are not orthonormal (residual {res:.3e})"
            )));
        }
        for k in 0..self.len() {
            if !is_canonical_cd(self.c[k], self.d[k], tol) {
                return Err(Error::InvalidArgument(format!(
                    "pair {k} is outside the canonical domain"
                )));
            }
        }
        Ok(())
    }
}

/// Builds the rank-1 POVM `E_k = [[|c_k|², c̄_k d_k], [c_k d̄_k, |d_k|²]]`.
pub fn rank1_from_cd(v: &CdVectors) -> Result<DiscretePovm> {
    v.validate(ALG_TOL)?;
    for k in 0..v.len() {
        if v.c[k].norm() <= ALG_TOL && v.d[k].norm() <= ALG_TOL {
            return Err(Error::InvalidArgument(format!("pair {k} is zero")));
        }
    }
    Ok(DiscretePovm::new(
        (0..v.len())
            .map(|k| Matrix2::gram(v.c[k], v.d[k]))
            .collect(),
    ))
}

/// Inverse of [`rank1_from_cd`]: unique canonical vectors of a rank-1 POVM.
pub fn cd_from_rank1(p: &DiscretePovm) -> Result<CdVectors> {
    let m = validate_povm(p, ALG_TOL, false)?;
    let mut c = Vec::with_capacity(p.len());
    let mut d = Vec::with_capacity(p.len());
    for (i, (e, &r)) in p.effects.iter().zip(&m.0).enumerate() {
        if r != 1 {
            return Err(Error::RankMismatch {
                expected: 1,
                actual: r,
            });
        }
        let s = spectral_split(e, ALG_TOL)
            .map_err(|err| Error::InvalidPovm(format!("effect {i}: {err}")))?;
        let (ck, dk) = canonicalize_cd(s.c_plus, s.d_plus)?;
        c.push(ck);
        d.push(dk);
    }
    Ok(CdVectors { c, d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn validate_noisy_spins() {
        let r = 1.0 / 2f64.sqrt();
        let e = (Matrix2::identity() + Matrix2::sigma1().scale(r)).scale(0.5);
        let p = DiscretePovm::binary(&e);
        let m = validate_povm(&p, ALG_TOL, false).unwrap();
        assert_eq!(m.0, vec![2, 2]);
    }

    #[test]
    fn validate_projective() {
        let p = DiscretePovm::new(vec![Matrix2::diag(1.0, 0.0), Matrix2::diag(0.0, 1.0)]);
        let m = validate_povm(&p, ALG_TOL, false).unwrap();
        assert_eq!(m.0, vec![1, 1]);
        assert_eq!(m.l1(), 2);
    }

    #[test]
    fn validate_trinary_half() {
        let p = crate::trinary::build_trinary(0.5).unwrap();
        let m = validate_povm(&p, ALG_TOL, false).unwrap();
        assert_eq!(m.0, vec![2, 2, 2]);
    }

    #[test]
    fn validate_rejects_bad_normalization() {
        let p = DiscretePovm::new(vec![Matrix2::diag(1.0, 0.0), Matrix2::diag(0.0, 0.9)]);
        assert!(validate_povm(&p, ALG_TOL, false).is_err());
    }

    #[test]
    fn zero_effects_need_opt_in() {
        let p = DiscretePovm::new(vec![
            Matrix2::diag(1.0, 0.0),
            Matrix2::diag(0.0, 1.0),
            Matrix2::zero(),
        ]);
        assert!(validate_povm(&p, ALG_TOL, false).is_err());
        let m = validate_povm(&p, ALG_TOL, true).unwrap();
        assert_eq!(m.0, vec![1, 1, 0]);
    }

    #[test]
    fn pauli_normalization_equivalence() {
        // Σ Eᵢ = 1 ⟺ Σ e⁰ᵢ = 2 and Σ eᵢ = 0.
        let p = crate::trinary::build_trinary(0.7).unwrap();
        let vs = p.pauli_vectors().unwrap();
        let e0: f64 = vs.iter().map(|v| v.e0).sum();
        assert!((e0 - 2.0).abs() <= 1e-12);
        for k in 0..3 {
            let s: f64 = vs.iter().map(|v| v.e[k]).sum();
            assert!(s.abs() <= 1e-12);
        }
        assert!(p.normalization_residual() <= 1e-12);
    }

    #[test]
    fn rank1_projective_pair() {
        let v = CdVectors {
            c: vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            d: vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        };
        let p = rank1_from_cd(&v).unwrap();
        assert!(p.effects[0].max_abs_diff(&Matrix2::diag(1.0, 0.0)) < 1e-15);
        assert!(p.effects[1].max_abs_diff(&Matrix2::diag(0.0, 1.0)) < 1e-15);
    }

    #[test]
    fn rank1_hadamard_pair() {
        let r = 1.0 / 2f64.sqrt();
        let v = CdVectors {
            c: vec![Complex64::new(r, 0.0), Complex64::new(r, 0.0)],
            d: vec![Complex64::new(r, 0.0), Complex64::new(-r, 0.0)],
        };
        let p = rank1_from_cd(&v).unwrap();
        let plus = (Matrix2::identity() + Matrix2::sigma1()).scale(0.5);
        let minus = (Matrix2::identity() - Matrix2::sigma1()).scale(0.5);
        assert!(p.effects[0].max_abs_diff(&plus) < 1e-15);
        assert!(p.effects[1].max_abs_diff(&minus) < 1e-15);
    }

    #[test]
    fn cd_from_sigma3_projections() {
        let p = DiscretePovm::new(vec![Matrix2::diag(1.0, 0.0), Matrix2::diag(0.0, 1.0)]);
        let v = cd_from_rank1(&p).unwrap();
        assert!((v.c[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(v.c[1].norm() < 1e-15);
        assert!(v.d[0].norm() < 1e-15);
        assert!((v.d[1] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn cd_from_trine() {
        // The λ = 1 trine ⅔·U_k|+⟩⟨+|U_k* round-trips through its vectors.
        let p = crate::trinary::build_trinary(1.0).unwrap();
        let v = cd_from_rank1(&p).unwrap();
        assert_eq!(v.len(), 3);
        assert!(v.orthonormality_residual() <= 1e-12);
        let back = rank1_from_cd(&v).unwrap();
        for (a, b) in back.effects.iter().zip(&p.effects) {
            assert!(a.max_abs_diff(b) <= 1e-12);
        }
    }

    #[test]
    fn cd_rejects_rank2() {
        let r = 1.0 / 2f64.sqrt();
        let e = (Matrix2::identity() + Matrix2::sigma1().scale(r)).scale(0.5);
        assert!(cd_from_rank1(&DiscretePovm::binary(&e)).is_err());
    }

    #[test]
    fn noise_mix_endpoints() {
        let p = crate::trinary::build_trinary(1.0).unwrap();
        let same = p.uniform_noise_mix(1.0).unwrap();
        for (a, b) in same.effects.iter().zip(&p.effects) {
            assert!(a.max_abs_diff(b) < 1e-15);
        }
        let flat = p.uniform_noise_mix(0.0).unwrap();
        for e in &flat.effects {
            assert!(e.max_abs_diff(&Matrix2::identity().scale(1.0 / 3.0)) < 1e-15);
        }
        assert!(p.uniform_noise_mix(1.5).is_err());
    }

    #[test]
    fn noise_mix_matches_trinary_family() {
        let trine = crate::trinary::build_trinary(1.0).unwrap();
        let mixed = trine.uniform_noise_mix(0.5).unwrap();
        let direct = crate::trinary::build_trinary(0.5).unwrap();
        for (a, b) in mixed.effects.iter().zip(&direct.effects) {
            assert!(a.max_abs_diff(b) <= 1e-15);
        }
        assert!(mixed.effects[0].max_abs_diff(&Matrix2::diag(0.5, 1.0 / 6.0)) <= 1e-15);
    }

    fn random_unit_pair(seed: u64, n: usize) -> CdVectors {
        use crate::sample::random_cd_vectors;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        random_cd_vectors(&mut rng, n)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bijection_round_trip(seed in 0u64..1_000, n in 2usize..6) {
            let v = random_unit_pair(seed, n);
            let p = rank1_from_cd(&v).unwrap();
            prop_assert!(p.normalization_residual() <= 1e-12);
            let back = cd_from_rank1(&p).unwrap();
            for k in 0..n {
                prop_assert!((back.c[k] - v.c[k]).norm() <= 1e-12);
                prop_assert!((back.d[k] - v.d[k]).norm() <= 1e-12);
            }
        }

        #[test]
        fn noise_mix_preserves_validity(seed in 0u64..1_000, lambda in 0.0..1.0f64) {
            let v = random_unit_pair(seed, 3);
            let p = rank1_from_cd(&v).unwrap();
            let mixed = p.uniform_noise_mix(lambda).unwrap();
            prop_assert!(validate_povm(&mixed, 1e-9, false).is_ok());
        }

        #[test]
        fn noise_mix_commutes_with_relabeling(seed in 0u64..1_000, lambda in 0.0..1.0f64) {
            let v = random_unit_pair(seed, 4);
            let p = rank1_from_cd(&v).unwrap();
            let perm = [2usize, 0, 3, 1];
            let relabeled = DiscretePovm::new(perm.iter().map(|&k| p.effects[k]).collect());
            let a = p.uniform_noise_mix(lambda).unwrap();
            let b = relabeled.uniform_noise_mix(lambda).unwrap();
            for (i, &k) in perm.iter().enumerate() {
                prop_assert!(b.effects[i].max_abs_diff(&a.effects[k]) <= 1e-15);
            }
        }
    }
}
