use thiserror::Error;

/// Errors surfaced by the library.
///
/// `Domain` carries a message naming the violated hypothesis so CLI users
/// see which precondition failed (e.g. "variance bound constant requires
/// 2/3 < alpha < 1"). Strict inequalities are enforced exactly: callers
/// wanting limit behaviour must pass interior points.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain violation: {0}")]
    Domain(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
