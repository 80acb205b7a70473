use thiserror::Error;

/// Errors raised by the partition, counting and series layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed partition token `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("truncation orders differ ({left} vs {right})")]
    OrderMismatch { left: usize, right: usize },

    #[error("series is not invertible: constant term must be +1 or -1")]
    NotInvertible,

    #[error("cache i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}

// checked helpers used by every counting path; overflow is an error, never a wrap
pub(crate) fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("addition"))
}

pub(crate) fn sub(a: i64, b: i64) -> Result<i64> {
    a.checked_sub(b).ok_or(Error::Overflow("subtraction"))
}

pub(crate) fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow("multiplication"))
}
