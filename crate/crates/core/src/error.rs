//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by construction, evaluation, integration and export.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or entry point received a malformed argument.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A function was evaluated outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive integration exhausted its subdivision budget. The best
    /// available value and its error estimate are carried along so callers
    /// can decide whether the partial answer is still useful.
    #[error(
        "integration did not converge: value {value:e}, error estimate {error_estimate:e} \
         after {subdivisions} subdivisions"
    )]
    ConvergenceFailure {
        value: f64,
        error_estimate: f64,
        subdivisions: usize,
    },

    /// The requested parameters fall outside the regime a routine supports.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    /// A spectral peak cannot be resolved on the sampling grid.
    #[error("peak unresolved: {0}")]
    PeakUnresolved(String),

    /// I/O failure during export or import, with the offending path.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// JSON (de)serialization failure.
    #[error("serialization error: {0}")]
    Serialization(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable tag for each error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid-input",
            Error::Domain(_) => "domain",
            Error::ConvergenceFailure { .. } => "convergence-failure",
            Error::UnsupportedRegime(_) => "unsupported-regime",
            Error::PeakUnresolved(_) => "peak-unresolved",
            Error::Io { .. } => "io",
            Error::Serialization(_) => "serialization",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
