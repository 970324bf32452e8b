use thiserror::Error;

/// Errors produced by code construction, counting, packing and verification.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid parameter combination: {0}")]
    InvalidParameterCombination(String),

    #[error("enumeration refused: dimension {dimension} exceeds cap {cap}")]
    EnumerationRefused { dimension: usize, cap: usize },

    #[error("minimum weight undefined for a zero-dimensional code")]
    UndefinedMinWeight,

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("materialization refused: {count} points exceed cap {cap}")]
    MaterializationRefused { count: String, cap: usize },

    #[error("verification refused: {points} points exceed exhaustive guard {guard}")]
    VerificationRefused { points: usize, guard: usize },

    #[error("certificate incomplete: {0}")]
    CertificateIncomplete(String),

    #[error("point file parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
