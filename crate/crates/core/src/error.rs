use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A configured size bound (sieve limit, enumeration bound) would be exceeded.
    #[error("resource bound exceeded: {0}")]
    Resource(String),
    /// A numerical procedure failed to converge or bracket a root.
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Malformed experiment configuration. `line` is 1-based when known.
    #[error("{}", match .line { Some(l) => format!("config error at line {l}: {}", .msg), None => format!("config error: {}", .msg) })]
    Config { line: Option<usize>, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
