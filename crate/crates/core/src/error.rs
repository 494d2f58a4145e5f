use thiserror::Error;

/// Errors raised by matrix primitives, state validation and the measure suites.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |m - m^dagger| entry is {max_deviation:e}")]
    NotHermitian { max_deviation: f64 },

    #[error("trace is {trace} (expected 1)")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue is {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("dimension {dim} is too small (need at least {min})")]
    DimTooSmall { dim: usize, min: usize },

    #[error("cannot parse matrix file: {0}")]
    Parse(String),

    #[error("malformed matrix: {0}")]
    Shape(String),

    #[error("eigensolver did not converge for a {dim}x{dim} matrix")]
    ConvergenceFailure { dim: usize },

    #[error("spectrum pattern is all zero")]
    AllZeroSpectrum,

    #[error("invalid saturating-pair specification: {0}")]
    InvalidPattern(String),

    #[error("kernel test needs at least 2 states, got {0}")]
    TooFewStates(usize),

    #[error("unknown identifier `{0}`")]
    UnknownMeasure(String),

    #[error("insufficient data for scaling fit of {measure}: {reason}")]
    InsufficientData { measure: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
