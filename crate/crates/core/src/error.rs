use thiserror::Error;

/// Errors raised by the geometry toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero vector has no projective point")]
    ZeroVector,
    #[error("point already lies in the flat")]
    PointInFlat,
    #[error("geometry is empty")]
    EmptyGeometry,
    #[error("field mismatch: GF({left}) vs GF({right})")]
    FieldMismatch { left: u64, right: u64 },
    #[error("invalid epsilon: {0}")]
    InvalidEpsilon(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("value too large: {0}")]
    Overflow(String),
}

impl Error {
    /// Stable machine-readable tag used by the CLI error object.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrimePower(_) => "NotPrimePower",
            Error::Unsupported(_) => "Unsupported",
            Error::DivisionByZero => "DivisionByZero",
            Error::ZeroVector => "ZeroVector",
            Error::PointInFlat => "PointInFlat",
            Error::EmptyGeometry => "EmptyGeometry",
            Error::FieldMismatch { .. } => "FieldMismatch",
            Error::InvalidEpsilon(_) => "InvalidEpsilon",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::InvalidGeometry(_) => "InvalidGeometry",
            Error::Parse(_) => "Parse",
            Error::Overflow(_) => "Overflow",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
