use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("matrix is not unitary (‖U†U − I‖_F = {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("normalization violated: {0}")]
    Normalization(String),

    #[error("invalid state: {invariant} ({detail})")]
    InvalidState {
        invariant: &'static str,
        detail: String,
    },

    #[error("correlation matrix is not diagonal (max off-diagonal {0:.3e})")]
    NotDiagonal(f64),

    #[error("wrong parameter count: expected {expected}, got {got}")]
    ParameterCount { expected: usize, got: usize },

    #[error("state format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
