use thiserror::Error;

use crate::linalg::NotConverged;

/// Errors raised anywhere in the solver suite.
///
/// The variants line up with the exit codes of the command-line runner:
/// configuration and contract problems are the caller's fault, solver
/// failures are numerical, geometry errors mean the grid cannot resolve the
/// requested ε-regions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("usage error: {0}")]
    Usage(String),

    /// A hypothesis of the estimate being checked does not hold.
    #[error("contract error: {0}")]
    Contract(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("solver failure at time step {step}: {source}")]
    Solver {
        step: usize,
        #[source]
        source: NotConverged,
    },

    #[error("fit error: {0}")]
    Fit(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn geometry(msg: impl Into<String>) -> Self {
        Error::Geometry(msg.into())
    }
}
