//! Random generators for effects, POVMs and coefficient vectors.
//!
//! Used by the test suites and benchmarks; exposed because randomized
//! measurement families are handy for downstream experimentation too.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::effect::{canonicalize_cd, PauliVector};
use crate::mat2::Matrix2;
use crate::povm::{rank1_from_cd, CdVectors, DiscretePovm};

fn gauss_c64<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Two orthonormal vectors in ℂⁿ with every row pair canonical.
///
/// Gaussian columns run through Gram–Schmidt; the per-row phase freedom is
/// then fixed into the canonical domain.
pub fn random_cd_vectors<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CdVectors {
    assert!(n >= 2, "need at least two rows for orthonormal columns");
    loop {
        let mut c: Vec<Complex64> = (0..n).map(|_| gauss_c64(rng)).collect();
        let mut d: Vec<Complex64> = (0..n).map(|_| gauss_c64(rng)).collect();
        let nc: f64 = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nc < 1e-6 {
            continue;
        }
        c.iter_mut().for_each(|z| *z /= nc);
        let ip: Complex64 = c.iter().zip(&d).map(|(a, b)| a.conj() * b).sum();
        d.iter_mut().zip(&c).for_each(|(z, a)| *z -= ip * a);
        let nd: f64 = d.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nd < 1e-6 {
            continue;
        }
        d.iter_mut().for_each(|z| *z /= nd);

        let mut ok = true;
        for k in 0..n {
            match canonicalize_cd(c[k], d[k]) {
                Ok((ck, dk)) => {
                    c[k] = ck;
                    d[k] = dk;
                }
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return CdVectors { c, d };
        }
    }
}

/// A random rank-1 POVM with `n` outcomes.
pub fn random_rank1_povm<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DiscretePovm {
    loop {
        let v = random_cd_vectors(rng, n);
        if let Ok(p) = rank1_from_cd(&v) {
            return p;
        }
    }
}

/// A random PSD matrix `A A†` from a Gaussian `A` (full rank almost surely).
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R) -> Matrix2 {
    let a = Matrix2::new(
        gauss_c64(rng),
        gauss_c64(rng),
        gauss_c64(rng),
        gauss_c64(rng),
    );
    a * a.adjoint()
}

/// A random POVM with the given per-outcome ranks (entries in {1, 2}).
///
/// Draws a PSD (rank-2) or Gram (rank-1) matrix per outcome and whitens the
/// lot: with `S = Σ Aᵢ` and `T = S^{-1/2}`, the effects `T Aᵢ T` sum to the
/// identity exactly and keep the prescribed ranks.
pub fn random_povm_with_ranks<R: Rng + ?Sized>(rng: &mut R, ranks: &[u8]) -> DiscretePovm {
    assert!(ranks.iter().all(|&r| r == 1 || r == 2));
    let parts: Vec<Matrix2> = ranks
        .iter()
        .map(|&r| {
            if r == 1 {
                Matrix2::gram(gauss_c64(rng), gauss_c64(rng))
            } else {
                random_psd(rng)
            }
        })
        .collect();
    let s = parts.iter().fold(Matrix2::zero(), |acc, a| acc + *a);
    let t = s.inv_sqrt_psd();
    DiscretePovm::new(parts.iter().map(|a| t * *a * t).collect())
}

/// A random POVM with `n` outcomes and random mixed ranks.
pub fn random_povm<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DiscretePovm {
    let ranks: Vec<u8> = (0..n)
        .map(|_| if rng.random::<bool>() { 1 } else { 2 })
        .collect();
    random_povm_with_ranks(rng, &ranks)
}

/// A random valid effect, uniform direction with spectrum inside `[0, 1]`.
pub fn random_effect<R: Rng + ?Sized>(rng: &mut R) -> PauliVector {
    let e0: f64 = rng.random_range(0.05..1.95);
    let dir = random_direction(rng);
    let cap = e0.min(2.0 - e0) * rng.random_range(0.0..1.0);
    PauliVector::new(e0, [dir[0] * cap, dir[1] * cap, dir[2] * cap])
}

/// A random unbiased effect (`e⁰ = 1`) with Bloch norm at most `max_norm`.
pub fn random_unbiased_effect<R: Rng + ?Sized>(rng: &mut R, max_norm: f64) -> PauliVector {
    let dir = random_direction(rng);
    let r = rng.random_range(0.0..max_norm);
    PauliVector::new(1.0, [dir[0] * r, dir[1] * r, dir[2] * r])
}

/// A uniformly random unit vector in ℝ³.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v = [
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}
