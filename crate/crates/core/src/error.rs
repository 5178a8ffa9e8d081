use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A documented precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// `a = sum a_j >= 1`: the model is not a contraction.
    #[error("contraction violated: {what} = {value} >= 1")]
    Contraction { what: String, value: f64 },
    /// A numeric routine produced a non-finite value or failed to converge.
    #[error("numeric error: {message}")]
    Numeric { message: String, best: Option<f64> },
    /// The requested accuracy needs more resources than allowed.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn contraction(what: impl Into<String>, value: f64) -> Self {
        Error::Contraction { what: what.into(), value }
    }
}
