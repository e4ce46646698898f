use thiserror::Error;

/// Errors raised by evaluators, verifiers and the argument parser.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input lies outside the domain of the requested function or identity.
    #[error("domain error: {0}")]
    Domain(String),

    /// The argument is an exceptional point of the identity; `redirect` names
    /// the identities that handle it.
    #[error("exceptional point {argument}: use {redirect}")]
    ExceptionalPoint { argument: String, redirect: String },

    /// A product or series hit `max_terms` before meeting its tail tolerance.
    #[error("no convergence after {terms} terms (last term magnitude {last_term:e})")]
    NoConvergence { terms: usize, last_term: f64 },

    /// A user-supplied callable failed.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// Requested precision growth exceeds the allowed budget.
    #[error("precision budget exceeded: {required} digits required, {allowed} allowed")]
    PrecisionBudget { required: u32, allowed: u32 },

    #[error("invalid precision context: {0}")]
    InvalidContext(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A file could not be read or written.
    #[error("i/o error: {0}")]
    Io(String),

    #[error("unknown identity '{0}'")]
    UnknownIdentity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
