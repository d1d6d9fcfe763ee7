use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("instance too large: {0}")]
    Resource(String),

    #[error("invalid degree spec at position {position}: {message}")]
    DegreeSpec { position: usize, message: String },

    #[error("scheme infeasible: {0}")]
    Infeasible(String),

    #[error("unsupported dimension {0}; rendering needs d = 2")]
    UnsupportedDimension(usize),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unknown transport rule `{0}`")]
    UnknownRule(String),

    #[error("malformed input at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
