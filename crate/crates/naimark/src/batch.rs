//! Data-parallel batch entry points.
//!
//! Every library call is a pure function of value inputs, so sweeps and
//! batch solves parallelize trivially. With the default `parallel` feature
//! these run on rayon; without it they fall back to sequential iteration
//! with identical results.

use crate::continuous::{
    threshold_pair_number_quadrature, threshold_pair_quadratures, threshold_triple, NoiseParams,
};
use crate::dilation::NaimarkDilation;
use crate::error::Result;
use crate::povm::DiscretePovm;
use crate::solve::{feasibility_solve, SolveOptions, SolveOutcome};

#[cfg(feature = "parallel")]
pub(crate) fn map_items<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_items<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Builds and verifies the dilation of every POVM; returns the residuals.
pub fn verify_dilations(povms: &[DiscretePovm]) -> Vec<Result<f64>> {
    map_items(povms, |p| NaimarkDilation::build(p)?.verify(p))
}

/// Runs the feasibility solver over a batch of pairs.
pub fn solve_batch(
    pairs: &[(DiscretePovm, DiscretePovm)],
    opts: &SolveOptions,
) -> Vec<Result<SolveOutcome>> {
    map_items(pairs, |(e, b)| feasibility_solve(e, b, opts))
}

/// One row of the equal-noise threshold sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdRow {
    pub eps: f64,
    pub triple: bool,
    pub pair_qq: bool,
    pub pair_nq: bool,
}

/// Evaluates all equal-noise compatibility predicates over a grid.
pub fn threshold_scan(eps_grid: &[f64]) -> Vec<ThresholdRow> {
    // θ drops out of every predicate; any admissible angle represents the
    // sweep.
    let theta = std::f64::consts::FRAC_PI_2;
    map_items(eps_grid, |&eps| ThresholdRow {
        eps,
        triple: NoiseParams::equal(eps, theta)
            .map(|p| threshold_triple(&p))
            .unwrap_or(false),
        pair_qq: threshold_pair_quadratures(eps, eps),
        pair_nq: threshold_pair_number_quadrature(eps, eps),
    })
}
