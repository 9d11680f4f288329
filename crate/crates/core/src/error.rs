use thiserror::Error;

/// Errors raised by the library and surfaced by the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A user-supplied value failed validation; `key` names the offending field.
    #[error("invalid value for `{key}`: {reason}")]
    Validation { key: String, reason: String },

    #[error("{what} needs an estimated {required} bytes, which exceeds the memory cap of {cap} bytes")]
    ResourceLimit {
        what: String,
        required: u128,
        cap: u64,
    },

    /// A numerical invariant that must hold by construction was violated.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            key: key.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
