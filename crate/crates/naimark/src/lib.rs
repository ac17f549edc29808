//! Minimal Naimark dilations of qubit POVMs and joint-measurement synthesis.
//!
//! A qubit effect is a positive semidefinite 2×2 matrix `E` with `1 - E` also
//! positive semidefinite. This crate represents effects in the Pauli basis,
//! builds the minimal Naimark dilation of any discrete qubit POVM from the
//! spectral data of its effects, and uses block-diagonal operators in the
//! dilation space to characterise, decide and construct the POVMs that are
//! jointly measurable with it. On top of the core machinery it ships the
//! closed-form compatibility criteria for binary qubit pairs, a three-outcome
//! covariant family with its noise threshold, and continuous single-photon
//! POVM families (quadrature, number, phase) with exact positivity predicates.
//!
//! Batch entry points (sweeps, solver batches) run on rayon when the default
//! `parallel` feature is enabled and fall back to sequential iteration
//! otherwise.

// Indexed loops over fixed 2×2/2×3 shapes read better than iterator chains
// here.
#![allow(clippy::needless_range_loop)]

pub mod batch;
pub mod continuous;
pub mod dilation;
pub mod effect;
mod error;
pub mod io;
pub mod joint;
pub mod mat2;
pub mod povm;
pub mod sample;
pub mod solve;
pub mod trinary;

pub use dilation::{BlockOperator, NaimarkDilation};
pub use effect::{PauliVector, SpectralSplit};
pub use error::{Error, Result};
pub use joint::{BlockEffectFamily, BlockPovm, JointPovm};
pub use mat2::Matrix2;
pub use povm::{CdVectors, DiscretePovm};
pub use solve::{SolveOptions, SolveOutcome};

/// Absolute tolerance for exact-algebra identities (reconstruction,
/// orthogonality, normalization) in double precision at qubit scale.
pub const ALG_TOL: f64 = 1e-12;

/// Tolerance for rank decisions and other spectral-gap classifications.
pub const RANK_TOL: f64 = 1e-9;

/// Default marginal residual below which a feasibility solve is accepted.
pub const DEFAULT_FEAS_TOL: f64 = 1e-9;

/// Default iteration cap of the alternating-projection solver.
pub const DEFAULT_MAX_ITERS: usize = 50_000;
