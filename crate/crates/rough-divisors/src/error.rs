use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// `Domain` means the arguments fall outside an operation's contract
/// (e.g. an empty interval, `w < 4` where a formula needs `w >= 4`).
/// `Resource` means the arguments are valid but the exact computation
/// would exceed a configured desk-scale budget (memory, enumeration
/// size, or 64-bit range); no allocation happens in that case.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    /// Conventional process exit code for this error kind (used by the CLI).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) => 2,
            Error::Resource(_) => 3,
        }
    }
}
