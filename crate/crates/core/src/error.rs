use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("not trace-preserving: {0}")]
    NotTracePreserving(String),

    #[error("composition not completely positive (min eigenvalue {0:e})")]
    NotCompletelyPositive(f64),

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),

    #[error("sigma not certified separable: {0}")]
    NotSeparable(String),

    #[error("cross-validation failed: {0}")]
    CrossCheck(String),

    #[error("inequality violated: {0}")]
    Violation(String),

    #[error("SDP solver failure: {0}")]
    Solver(String),

    #[error("unknown suite: {0}")]
    UnknownSuite(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
