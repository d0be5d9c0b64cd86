use thiserror::Error;

use crate::index::Violation;

/// Errors raised by the library.
///
/// Violations found by [`crate::index::validate_binomid`] are a normal
/// result; they only become an error when an operation requires a binomid
/// input and gets something else.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index must have at least one entry")]
    EmptyIndex,

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("{what} out of range: {detail}")]
    Range { what: &'static str, detail: String },

    #[error("input is not a binomid index ({} violation(s))", .0.len())]
    NotBinomid(Vec<Violation>),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A post-hoc verification pass rejected a computed result.
    #[error("certificate check failed: {0}")]
    Certificate(String),
}

impl Error {
    pub(crate) fn range(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Range {
            what,
            detail: detail.into(),
        }
    }

    /// Short machine-readable tag, used by the CLI's JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyIndex => "empty_index",
            Error::Overflow(_) => "overflow",
            Error::Range { .. } => "range",
            Error::NotBinomid(_) => "not_binomid",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Unsupported(_) => "unsupported",
            Error::Certificate(_) => "certificate",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
