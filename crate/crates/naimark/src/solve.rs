//! Deciding whether a target POVM is compatible with a given one.
//!
//! The block family `F = {F_ij}` is feasible iff it lies in the
//! intersection of
//!
//! * the affine set `{F : Σ_j F_ij = P_i ∀i, Σ_i J* F_ij J = B_j ∀j}`, and
//! * the product cone of per-block operator intervals `0 ≤ F_ij ≤ 1`.
//!
//! Both sets are closed convex with cheap projections at qubit scale, so
//! the solver runs Dykstra-style alternating projections: least-squares
//! projection onto the affine set (pseudo-inverse of the stacked linear
//! map, precomputed once) against spectral clipping onto the cone, with
//! the correction term kept only for the non-affine set.
//!
//! Infeasibility is certified only analytically: the pair criterion for
//! binary pairs, and the order-theoretic obstruction for binary pairs of
//! rank-1 effects (`N₁₁` is forced to vanish, so `1 − E − B` must be
//! PSD). Everything else times out as `Undecided` — never as a false
//! `Infeasible`.

use nalgebra::{DMatrix, DVector};

use crate::dilation::NaimarkDilation;
use crate::effect::{pauli_compose, pauli_decompose, pauli_rank, PauliVector};
use crate::error::Result;
use crate::joint::{busch_necessary, busch_sum, BlockEffectFamily, BlockPovm};
use crate::mat2::Matrix2;
use crate::povm::{validate_povm, DiscretePovm};
use crate::{ALG_TOL, DEFAULT_FEAS_TOL, DEFAULT_MAX_ITERS, RANK_TOL};

/// Solver configuration.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Marginal residual below which the family is accepted.
    pub feas_tol: f64,
    /// Iteration cap before reporting `Undecided`.
    pub max_iters: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            feas_tol: DEFAULT_FEAS_TOL,
            max_iters: DEFAULT_MAX_ITERS,
        }
    }
}

/// Result of a feasibility solve.
#[derive(Debug, Clone)]
pub enum SolveOutcome {
    /// A block family whose compression has the requested marginals.
    Feasible(BlockEffectFamily),
    /// Analytically certified incompatibility.
    Infeasible(Certificate),
    /// No convergence within the iteration budget; final residual attached.
    Undecided { residual: f64 },
}

impl SolveOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SolveOutcome::Feasible(_))
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, SolveOutcome::Infeasible(_))
    }
}

/// Why a pair was rejected without a numerical search.
#[derive(Debug, Clone)]
pub enum Certificate {
    /// `‖e + b‖ + ‖e − b‖ > 2` for a binary pair (necessary for all pairs).
    BuschViolation { sum: f64 },
    /// Both designated effects have rank 1 with distinct supports, forcing
    /// the shared cell to vanish; `1 − X − Y` then has a negative eigenvalue.
    Rank1Obstruction { min_eig: f64 },
}

impl std::fmt::Display for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Certificate::BuschViolation { sum } => {
                write!(f, "pair criterion violated: ‖e+b‖+‖e−b‖ = {sum} > 2")
            }
            Certificate::Rank1Obstruction { min_eig } => {
                write!(
                    f,
                    "rank-1 obstruction: 1 − X − Y has eigenvalue {min_eig} < 0"
                )
            }
        }
    }
}

/// Decides whether `b_target` is jointly measurable with `e`, and if so
/// returns a block family realizing it in the dilation of `e`.
pub fn feasibility_solve(
    e: &DiscretePovm,
    b_target: &DiscretePovm,
    opts: &SolveOptions,
) -> Result<SolveOutcome> {
    validate_povm(e, ALG_TOL, false)?;
    validate_povm(b_target, ALG_TOL, false)?;

    if e.len() == 2 && b_target.len() == 2 {
        if let Some(cert) = binary_pair_certificate(e, b_target)? {
            return Ok(SolveOutcome::Infeasible(cert));
        }
    }

    let dilation = NaimarkDilation::build(e)?;
    Ok(dykstra(&dilation, b_target, opts))
}

/// Analytic preprocessing for binary pairs. `None` means "no obstruction
/// found", not "compatible".
fn binary_pair_certificate(e: &DiscretePovm, b: &DiscretePovm) -> Result<Option<Certificate>> {
    let ev = pauli_decompose(&e.effects[0])?;
    let bv = pauli_decompose(&b.effects[0])?;
    let sum = busch_sum(&ev, &bv);
    if !busch_necessary(&ev, &bv) {
        return Ok(Some(Certificate::BuschViolation { sum }));
    }
    // Corner obstructions: for each pair of designated effects (X, Y) of
    // rank 1 with distinct supports, any joint grid forces the common cell
    // to zero, so 1 − X − Y must be PSD.
    for x in [ev, ev.complement()] {
        for y in [bv, bv.complement()] {
            if pauli_rank(&x, RANK_TOL) != 1 || pauli_rank(&y, RANK_TOL) != 1 {
                continue;
            }
            // Same support ⇒ commuting ⇒ no obstruction from this corner.
            let nx = x.bloch_norm();
            let ny = y.bloch_norm();
            let cosang = x.dot(&y) / (nx * ny);
            if cosang >= 1.0 - 1e-9 {
                continue;
            }
            let rest = Matrix2::identity() - pauli_compose(&x) - pauli_compose(&y);
            let min_eig = rest.min_eigenvalue();
            if min_eig < -10.0 * DEFAULT_FEAS_TOL {
                return Ok(Some(Certificate::Rank1Obstruction { min_eig }));
            }
        }
    }
    Ok(None)
}

/// Real parametrization of one block column: scalar blocks take one slot,
/// two-dimensional blocks take their four Pauli components.
struct Layout {
    /// (offset into x, params per outcome) for each block.
    spans: Vec<(usize, usize)>,
    /// Total unknowns.
    n: usize,
    outcomes: usize,
}

impl Layout {
    fn new(d: &NaimarkDilation, outcomes: usize) -> Self {
        let mut spans = Vec::with_capacity(d.blocks());
        let mut n = 0;
        for &mi in &d.m.0 {
            let width = if mi == 1 { 1 } else { 4 };
            spans.push((n, width));
            n += width * outcomes;
        }
        Self { spans, n, outcomes }
    }

    fn slot(&self, block: usize, outcome: usize) -> (usize, usize) {
        let (off, width) = self.spans[block];
        (off + outcome * width, width)
    }
}

fn dykstra(d: &NaimarkDilation, b_target: &DiscretePovm, opts: &SolveOptions) -> SolveOutcome {
    let m_out = b_target.len();
    let layout = Layout::new(d, m_out);

    // Stacked linear map: per-block row sums hit the block identity, and
    // per-outcome compressed column sums hit the target Pauli vectors.
    let rows_per_block: usize = d.m.0.iter().map(|&mi| if mi == 1 { 1 } else { 4 }).sum();
    let n_rows = rows_per_block + 4 * m_out;
    let mut a = DMatrix::<f64>::zeros(n_rows, layout.n);
    let mut rhs = DVector::<f64>::zeros(n_rows);

    let mut r = 0;
    for (i, &mi) in d.m.0.iter().enumerate() {
        let width = if mi == 1 { 1 } else { 4 };
        for w in 0..width {
            for j in 0..m_out {
                let (off, _) = layout.slot(i, j);
                a[(r + w, off + w)] = 1.0;
            }
        }
        if mi == 1 {
            rhs[r] = 1.0;
        } else {
            rhs[r] = 2.0; // Pauli e⁰ of the block identity
        }
        r += width;
    }
    // Compression maps each block's parameters to the Pauli vector of its
    // contribution: scalar blocks scale E_i, two-dimensional blocks act by
    // the conjugation table.
    let mut compress_cols: Vec<Vec<[f64; 4]>> = Vec::with_capacity(d.blocks());
    for (i, &mi) in d.m.0.iter().enumerate() {
        if mi == 1 {
            let v = pauli_decompose(&d.block_marginal(i)).expect("marginal is Hermitian");
            compress_cols.push(vec![[v.e0, v.e[0], v.e[1], v.e[2]]]);
        } else {
            let table = d.pauli_conjugation_table(i).expect("block has dimension 2");
            compress_cols.push(
                table
                    .iter()
                    .map(|t| {
                        let v = pauli_decompose(t).expect("table entry is Hermitian");
                        [v.e0 / 2.0, v.e[0] / 2.0, v.e[1] / 2.0, v.e[2] / 2.0]
                    })
                    .collect(),
            );
        }
    }
    for (j, bj) in b_target.effects.iter().enumerate() {
        let bv = pauli_decompose(bj).expect("target effect is Hermitian");
        let row0 = rows_per_block + 4 * j;
        for mu in 0..4 {
            rhs[row0 + mu] = match mu {
                0 => bv.e0,
                _ => bv.e[mu - 1],
            };
        }
        for i in 0..d.blocks() {
            let (off, width) = layout.slot(i, j);
            for (w, col) in compress_cols[i].iter().enumerate() {
                debug_assert!(w < width);
                for mu in 0..4 {
                    a[(row0 + mu, off + w)] = col[mu];
                }
            }
        }
    }

    // Projection onto {x : A x = b} is x − Aᵀ(AAᵀ)⁺(Ax − b); the row-sum
    // and column-sum constraints overlap, so AAᵀ is rank deficient and a
    // thresholded pseudo-inverse is required.
    let gram = &a * a.transpose();
    let pinv = gram
        .svd(true, true)
        .pseudo_inverse(1e-10)
        .expect("SVD of the constraint Gram matrix");
    let corr = a.transpose() * pinv;

    // Initial point: the uniform family F_ij = P_i / M.
    let mut x = DVector::<f64>::zeros(layout.n);
    for i in 0..d.blocks() {
        for j in 0..m_out {
            let (off, width) = layout.slot(i, j);
            x[off] = if width == 1 {
                1.0 / m_out as f64
            } else {
                2.0 / m_out as f64
            };
        }
    }

    let mut q = DVector::<f64>::zeros(layout.n);
    let mut residual = f64::INFINITY;
    for _ in 0..opts.max_iters {
        // Affine step (no correction needed for an affine set).
        let violation = &a * &x - &rhs;
        let y = &x - &corr * violation;

        // Fast exit: the affine point already sits in the cone. The affine
        // residual must be re-checked here — an inconsistent system leaves
        // the least-squares point off the constraint set.
        let affine_res = (&a * &y - &rhs).amax();
        if affine_res <= opts.feas_tol && cone_violation(&y, &layout) <= 1e-13 {
            x = y;
            residual = affine_res;
            break;
        }

        // Cone step with Dykstra correction.
        let w = &y + &q;
        let z = project_cone(&w, &layout);
        q = w - &z;

        residual = (&a * &z - &rhs).amax();
        x = z;
        if residual <= opts.feas_tol {
            break;
        }
    }

    if residual > opts.feas_tol {
        return SolveOutcome::Undecided { residual };
    }

    // Reconstruct the family, clipping stray eigenvalues within tolerance.
    let mut blocks = Vec::with_capacity(d.blocks());
    for (i, &mi) in d.m.0.iter().enumerate() {
        if mi == 1 {
            let vals = (0..m_out)
                .map(|j| {
                    let (off, _) = layout.slot(i, j);
                    x[off].clamp(0.0, 1.0)
                })
                .collect();
            blocks.push(BlockPovm::Scalar(vals));
        } else {
            let mats = (0..m_out)
                .map(|j| {
                    let (off, _) = layout.slot(i, j);
                    pauli_compose(&PauliVector::new(
                        x[off],
                        [x[off + 1], x[off + 2], x[off + 3]],
                    ))
                    .clip_spectrum(0.0, 1.0)
                })
                .collect();
            blocks.push(BlockPovm::Qubit(mats));
        }
    }
    SolveOutcome::Feasible(BlockEffectFamily { blocks })
}

/// Distance-like violation of the operator-interval cone.
fn cone_violation(x: &DVector<f64>, layout: &Layout) -> f64 {
    let mut worst: f64 = 0.0;
    for (b, &(_, width)) in layout.spans.iter().enumerate() {
        for j in 0..layout.outcomes {
            let (off, _) = layout.slot(b, j);
            if width == 1 {
                worst = worst.max(-x[off]).max(x[off] - 1.0);
            } else {
                let e0 = x[off];
                let n =
                    (x[off + 1] * x[off + 1] + x[off + 2] * x[off + 2] + x[off + 3] * x[off + 3])
                        .sqrt();
                let lo = (e0 - n) / 2.0;
                let hi = (e0 + n) / 2.0;
                worst = worst.max(-lo).max(hi - 1.0);
            }
        }
    }
    worst
}

/// Per-block spectral clipping into `[0, 1]`, written on Pauli components:
/// the eigenvalues `½(f⁰ ± ‖f‖)` are clamped and the matrix rebuilt along
/// the same Bloch direction.
fn project_cone(x: &DVector<f64>, layout: &Layout) -> DVector<f64> {
    let mut out = x.clone();
    for (b, &(_, width)) in layout.spans.iter().enumerate() {
        for j in 0..layout.outcomes {
            let (off, _) = layout.slot(b, j);
            if width == 1 {
                out[off] = x[off].clamp(0.0, 1.0);
            } else {
                let e0 = x[off];
                let v = [x[off + 1], x[off + 2], x[off + 3]];
                let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                let lo = ((e0 - n) / 2.0).clamp(0.0, 1.0);
                let hi = ((e0 + n) / 2.0).clamp(0.0, 1.0);
                out[off] = lo + hi;
                if n > 0.0 {
                    let s = (hi - lo) / n;
                    out[off + 1] = v[0] * s;
                    out[off + 2] = v[1] * s;
                    out[off + 3] = v[2] * s;
                } else {
                    out[off + 1] = 0.0;
                    out[off + 2] = 0.0;
                    out[off + 3] = 0.0;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::joint::assemble_joint;
    use crate::sample::random_unbiased_effect;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;
    const SQRT_15: f64 = 3.872983346207417;

    fn unbiased_binary(v: [f64; 3]) -> DiscretePovm {
        DiscretePovm::binary(&pauli_compose(&PauliVector::new(1.0, v)))
    }

    #[test]
    fn commuting_projective_pair_is_feasible() {
        let p = DiscretePovm::new(vec![Matrix2::diag(1.0, 0.0), Matrix2::diag(0.0, 1.0)]);
        let out = feasibility_solve(&p, &p, &SolveOptions::default()).unwrap();
        match out {
            SolveOutcome::Feasible(fam) => {
                let d = NaimarkDilation::build(&p).unwrap();
                let joint = assemble_joint(&d, &fam).unwrap();
                assert!(joint.marginal_residual(&p, &p) <= 1e-8);
                // The grid reproduces N_ij = E_i B_j for this commuting pair.
                for i in 0..2 {
                    for j in 0..2 {
                        let expect = p.effects[i] * p.effects[j];
                        assert!(joint.grid[i][j].max_abs_diff(&expect) <= 1e-8);
                    }
                }
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn noisy_spins_at_boundary_are_feasible() {
        let e = unbiased_binary([INV_SQRT2, 0.0, 0.0]);
        let b = unbiased_binary([0.0, 0.0, INV_SQRT2]);
        let out = feasibility_solve(&e, &b, &SolveOptions::default()).unwrap();
        assert!(out.is_feasible(), "got {out:?}");
    }

    #[test]
    fn every_povm_is_self_compatible() {
        // The diagonal grid N_ij = δ_ij E_i always exists; the solver must
        // find some realization across mixed block shapes.
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for ranks in [vec![2, 1], vec![1, 2, 2], vec![2, 2, 1], vec![1, 1, 2, 2]] {
            let p = crate::sample::random_povm_with_ranks(&mut rng, &ranks);
            match feasibility_solve(&p, &p, &SolveOptions::default()).unwrap() {
                SolveOutcome::Feasible(fam) => {
                    let d = NaimarkDilation::build(&p).unwrap();
                    let joint = assemble_joint(&d, &fam).unwrap();
                    assert!(joint.marginal_residual(&p, &p) <= 1e-7, "ranks {ranks:?}");
                    assert!(joint.min_eigenvalue() >= -1e-9);
                }
                other => panic!("ranks {ranks:?}: expected feasible, got {other:?}"),
            }
        }
    }

    #[test]
    fn noisy_spins_beyond_boundary_hit_busch_certificate() {
        let e = unbiased_binary([0.8, 0.0, 0.0]);
        let b = unbiased_binary([0.0, 0.0, 0.8]);
        match feasibility_solve(&e, &b, &SolveOptions::default()).unwrap() {
            SolveOutcome::Infeasible(Certificate::BuschViolation { sum }) => {
                assert!((sum - 1.6 * 2f64.sqrt()).abs() <= 1e-12);
            }
            other => panic!("expected Busch violation, got {other:?}"),
        }
    }

    #[test]
    fn biased_rank1_counterexample_is_certified() {
        // Equivalent-form equality holds, yet 1 − E − B is not PSD: its
        // top-left entry is the analytic value (7 − 2√15)/8 < 0, and the
        // certificate eigenvalue lies at or below it.
        let s = SQRT_15 / 4.0;
        let e1 = Matrix2::diag(s, 0.0);
        let b1 = Matrix2::from_real(0.125, 0.125, 0.125, 0.125);
        let witness = (7.0 - 2.0 * SQRT_15) / 8.0;
        assert!(witness < 0.0);
        let rest = Matrix2::identity() - e1 - b1;
        assert!((rest.m[0][0].re - witness).abs() <= 1e-12);

        let e = DiscretePovm::binary(&e1);
        let b = DiscretePovm::binary(&b1);
        match feasibility_solve(&e, &b, &SolveOptions::default()).unwrap() {
            SolveOutcome::Infeasible(Certificate::Rank1Obstruction { min_eig }) => {
                assert!(min_eig < 0.0);
                assert!(min_eig <= witness + 1e-12);
                assert!((min_eig - rest.min_eigenvalue()).abs() <= 1e-12);
            }
            other => panic!("expected rank-1 obstruction, got {other:?}"),
        }
    }

    #[test]
    fn feasible_family_reassembles_marginals() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut checked = 0;
        while checked < 20 {
            let e = random_unbiased_effect(&mut rng, 1.0);
            let b = random_unbiased_effect(&mut rng, 1.0);
            if busch_sum(&e, &b) > 1.95 {
                continue; // keep clear of the boundary for fast convergence
            }
            checked += 1;
            let pe = unbiased_binary(e.e);
            let pb = unbiased_binary(b.e);
            match feasibility_solve(&pe, &pb, &SolveOptions::default()).unwrap() {
                SolveOutcome::Feasible(fam) => {
                    let d = NaimarkDilation::build(&pe).unwrap();
                    let joint = assemble_joint(&d, &fam).unwrap();
                    assert!(joint.marginal_residual(&pe, &pb) <= 1e-7);
                    assert!(joint.min_eigenvalue() >= -1e-9);
                }
                other => panic!("expected feasible for {e:?}, {b:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn rank1_dilated_povm_yields_commuting_targets() {
        // Binary E with m = (1, 1): every compatible B is e₂·1 + (e₁−e₂)E.
        let p = DiscretePovm::new(vec![Matrix2::diag(1.0, 0.0), Matrix2::diag(0.0, 1.0)]);
        let d = NaimarkDilation::build(&p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..20 {
            let (f1, f2): (f64, f64) = (
                rand::Rng::random_range(&mut rng, 0.0..1.0),
                rand::Rng::random_range(&mut rng, 0.0..1.0),
            );
            let b1 = p.effects[0].scale(f1) + p.effects[1].scale(f2);
            let b = DiscretePovm::binary(&b1);
            match feasibility_solve(&p, &b, &SolveOptions::default()).unwrap() {
                SolveOutcome::Feasible(fam) => {
                    let joint = assemble_joint(&d, &fam).unwrap();
                    let (_, cols) = joint.marginals().unwrap();
                    for c in &cols.effects {
                        assert!(c.commutator_norm(&p.effects[0]) <= 1e-8);
                    }
                }
                other => panic!("expected feasible, got {other:?}"),
            }
        }
    }

    #[test]
    fn trinary_pair_feasible_within_ansatz_region() {
        let e = crate::trinary::build_trinary(0.5).unwrap();
        let b = crate::trinary::target_minus(0.5).unwrap();
        let out = feasibility_solve(&e, &b, &SolveOptions::default()).unwrap();
        assert!(out.is_feasible(), "got {out:?}");
    }

    #[test]
    fn pair_criterion_holds_on_feasible_biased_samples() {
        // Sampled support for treating the pair criterion as necessary for
        // biased pairs: whenever the solver exhibits a joint measurement,
        // the criterion holds.
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let mut feasible = 0;
        for _ in 0..60 {
            let e = crate::sample::random_effect(&mut rng);
            let b = crate::sample::random_effect(&mut rng);
            let pe = DiscretePovm::binary(&pauli_compose(&e));
            let pb = DiscretePovm::binary(&pauli_compose(&b));
            if let SolveOutcome::Feasible(_) =
                feasibility_solve(&pe, &pb, &SolveOptions::default()).unwrap()
            {
                feasible += 1;
                assert!(busch_necessary(&e, &b), "e = {e:?}, b = {b:?}");
            }
        }
        assert!(feasible > 0, "sample produced no feasible pairs");
    }

    #[test]
    fn monotone_under_uniform_noise() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut checked = 0;
        while checked < 5 {
            let e = random_unbiased_effect(&mut rng, 1.0);
            let b = random_unbiased_effect(&mut rng, 1.0);
            if busch_sum(&e, &b) > 1.9 {
                continue;
            }
            checked += 1;
            let pe = unbiased_binary(e.e);
            let pb = unbiased_binary(b.e);
            for lam in [0.0, 0.3, 0.7, 1.0] {
                let mixed = pe.uniform_noise_mix(lam).unwrap();
                let out = feasibility_solve(&mixed, &pb, &SolveOptions::default()).unwrap();
                assert!(out.is_feasible(), "λ = {lam}");
            }
        }
    }
}
