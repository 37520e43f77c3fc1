use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("the zero polynomial is divisible by every cyclotomic polynomial")]
    ZeroPolynomial,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid generator set: {0}")]
    InvalidGeneratorSet(String),

    #[error("invalid family parameters: {0}")]
    Parameter(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("order {n} exceeds the kernel oracle limit {limit}")]
    Capacity { n: u64, limit: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    /// True when the error stems from malformed user input rather than a
    /// failure of the requested computation.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_)
                | Error::InvalidGeneratorSet(_)
                | Error::Parameter(_)
                | Error::Parse(_)
        )
    }
}
