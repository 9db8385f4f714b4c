use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by graph tooling, the eigensolver, the protocol and the baselines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("protocol order violation: {0}")]
    ProtocolOrder(String),

    #[error("protocol aborted in phase `{phase}`: {source}")]
    Phase {
        phase: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("privacy budget exhausted: charging {requested} would bring spend to {would_total} > {budget}")]
    Budget {
        requested: f64,
        would_total: f64,
        budget: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn order(msg: impl Into<String>) -> Self {
        Error::ProtocolOrder(msg.into())
    }

    /// Innermost error, looking through phase wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Phase { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
