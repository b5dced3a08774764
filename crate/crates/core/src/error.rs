use thiserror::Error;

/// Errors raised by the samplers and the numerical routines behind them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A solid angle fraction (or a difference of two) is too small to be
    /// represented. The rejection planar-angle generator avoids this path.
    #[error("floating point underflow: {0}")]
    Underflow(String),

    /// An iterative routine did not reach its tolerance.
    #[error("numeric error: {0}")]
    Numeric(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
