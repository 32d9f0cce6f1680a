use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Every variant belongs to one of three families (see [`ErrorClass`]) which
/// the command-line driver maps onto process exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} entries, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("polynomials belong to different rings")]
    RingMismatch,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("decryption failed: {0}")]
    Decryption(String),

    #[error("build step {index} ({op}) failed: {source}")]
    Step {
        index: usize,
        op: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Coarse error families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Domain,
    Resource,
    Decryption,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Resource(_) => ErrorClass::Resource,
            Error::Decryption(_) => ErrorClass::Decryption,
            Error::Step { source, .. } => source.class(),
            _ => ErrorClass::Domain,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
