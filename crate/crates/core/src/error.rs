use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} is {got}, above the cap of {cap}")]
    Size {
        what: &'static str,
        got: usize,
        cap: usize,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("work budget exceeded: {needed:.3e} steps requested, budget is {budget:.3e}")]
    Budget { needed: f64, budget: f64 },
    #[error("usage error: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// A checked identity or theorem failed; always an implementation bug.
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
