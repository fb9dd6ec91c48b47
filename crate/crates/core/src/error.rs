use thiserror::Error;

/// Errors raised by the numerical routines and the file formats.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    #[error("dimension {0} exceeds the dense cap of {cap}", cap = crate::matkernel::MAX_DIM)]
    DimTooLarge(usize),

    #[error("dimension {0} is too small for this construction")]
    DimTooSmall(usize),

    #[error("matrix contains NaN or infinite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("matrix is not an orthogonal projector (deviation {0:e})")]
    NotProjector(f64),

    #[error("trace is {0}, expected 1")]
    BadTrace(f64),

    #[error("vector norm is {0}, expected 1")]
    NotNormalized(f64),

    #[error("environment dimension {env_dim} is smaller than the state rank {rank}")]
    EnvTooSmall { env_dim: usize, rank: usize },

    #[error("requested rank {rank} is outside 1..={dim}")]
    BadRank { rank: usize, dim: usize },

    #[error("target overlap {target} is outside [0, {max}]")]
    TargetOutOfRange { target: f64, max: f64 },

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid projective measurement: {0}")]
    InvalidMeasurement(String),

    #[error("value {value} is out of range for {what}")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("input pair is indistinguishable (f = {0}); the relative error is 0/0")]
    IndistinguishablePair(f64),

    #[error("bound undefined for f = 1")]
    DegeneratePair,

    #[error("optimizer budget must be positive")]
    BudgetZero,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("decomposition failed: {0}")]
    Decomposition(&'static str),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
