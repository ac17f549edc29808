use thiserror::Error;

/// Errors produced by validation and construction routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not an effect: {0}")]
    NotAnEffect(String),
    #[error("invalid POVM: {0}")]
    InvalidPovm(String),
    #[error("effect has rank {actual}, expected {expected}")]
    RankMismatch { expected: u8, actual: u8 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parameter out of range: {name} = {value} not in {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("construction infeasible: {0}")]
    Infeasible(String),
    #[error("unsupported operator density: {0}")]
    UnsupportedDensity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
