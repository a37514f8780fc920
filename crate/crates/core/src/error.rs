use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("value vanishes at precision {prec}")]
    ZeroAtPrecision { prec: i64 },
    #[error("not a one-unit: {0}")]
    NotOneUnit(String),
    #[error("not a unit modulo P^k")]
    NotUnit,
    #[error("polynomial is reducible")]
    Reducible,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("certificate failure: {0}")]
    Certificate(String),
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
    #[error("json: {0}")]
    Json(String),
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Errors that mean "more digits or precision needed" rather than bad input.
    pub fn is_certificate(&self) -> bool {
        matches!(self, Error::Certificate(_) | Error::ZeroAtPrecision { .. })
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
