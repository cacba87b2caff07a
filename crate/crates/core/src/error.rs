use thiserror::Error;

/// Errors raised by the engine.
///
/// Mathematical "no" answers (not a lattice, not a pole poset, ...) are
/// never errors; they are encoded as `Option` or `bool` by the operation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("contract violated: {0}")]
    Contract(String),
    #[error("resource guard exceeded: {0}")]
    ResourceGuard(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Dimension(msg.into()))
}

pub(crate) fn contract_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Contract(msg.into()))
}

pub(crate) fn guard_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::ResourceGuard(msg.into()))
}
