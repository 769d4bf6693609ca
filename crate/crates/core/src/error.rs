use thiserror::Error;

/// Errors produced by graph construction, dynamics, and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A closed-form expression was evaluated outside the region where it
    /// is defined (complex roots, nonpositive denominator, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A run exceeded the configured population cap. Supercritical growth
    /// is exponential, so unbounded runs would exhaust memory.
    #[error("resource guard tripped at t={time}: population {population} exceeds cap {cap}")]
    ResourceGuard {
        time: u64,
        population: u64,
        cap: u64,
    },

    #[error("bracket error: {0}")]
    Bracket(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid_parameter(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn invalid_argument(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
