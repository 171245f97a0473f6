use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (residual {0:.3e})")]
    NotHermitian(f64),
    #[error("trace is {0}, expected 1")]
    NotNormalized(f64),
    #[error("minimum eigenvalue {0:.3e} below the PSD floor")]
    NotPositive(f64),
    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("problem too large: {reason} (estimated {estimated_bytes} bytes)")]
    SizeRefused { reason: String, estimated_bytes: u64 },
    #[error("not implemented: {0}")]
    NotImplemented(String),
    #[error("objective returned NaN at {0:?}")]
    NanObjective(Vec<f64>),
    #[error("solver failed: {0}")]
    Solver(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
