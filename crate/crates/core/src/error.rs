use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A variance quantity vanished where a strictly positive one is needed.
    #[error("degenerate statistic: {0}")]
    Degenerate(String),

    #[error("method `{method}` is not supported for {context}")]
    UnsupportedMethod { method: String, context: String },

    #[error("unknown method id `{0}`")]
    UnknownMethod(String),

    /// The request is valid but exceeds the size an exact computation allows.
    #[error("resource limit: {0}")]
    ResourceLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn check_alpha<T: crate::Real>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha < T::one() {
        Ok(())
    } else {
        domain(format!("alpha must lie in (0, 1), got {alpha:?}"))
    }
}

pub(crate) fn check_probability<T: crate::Real>(p: T, name: &str) -> Result<()> {
    if p >= T::zero() && p <= T::one() {
        Ok(())
    } else {
        domain(format!("{name} must lie in [0, 1], got {p:?}"))
    }
}
