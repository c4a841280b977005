use thiserror::Error;

/// Errors produced by the solver, the condition estimators and the I/O layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("result dimensions overflow usize")]
    DimensionOverflow,

    #[error("SVD failed to converge")]
    SvdFailed,

    #[error("nongeneric TLS problem: gap {gap:.3e} <= threshold {threshold:.3e}")]
    Nongeneric { gap: f64, threshold: f64 },

    #[error("degenerate TLS problem: last component of v_{{n+1}} is zero")]
    Degenerate,

    #[error("linear system is singular")]
    SingularSystem,

    #[error("L^T x is zero; relative condition number is undefined")]
    ZeroObservation,

    #[error("index {index} out of range for dimension {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("dense representation needs {required} entries, above the cap of {cap}")]
    SizeCapExceeded { required: usize, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
