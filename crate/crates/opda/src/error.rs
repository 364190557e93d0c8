use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Vector/matrix lengths do not agree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A NaN or infinity appeared where a finite value is required.
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    /// Malformed input text (LIBSVM data, trace CSV).
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Invalid run configuration. Aggregates every problem found.
    #[error("config error: {0}")]
    Config(String),

    /// The dataset violates a documented requirement.
    #[error("data error: {0}")]
    Data(String),

    /// A solver iterate left the finite/bounded regime.
    #[error("divergence at step {step}: {msg}")]
    Divergence { step: usize, msg: String },

    /// The suboptimality oracle failed to converge.
    #[error("oracle error: {0}")]
    Oracle(String),

    /// The operation is not defined for this objective kind.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Coarse category used for CLI diagnostics and exit codes.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Dimension { .. }
            | Error::Argument(_)
            | Error::Config(_)
            | Error::Unsupported(_) => "config",
            Error::Parse { .. } | Error::Data(_) | Error::NonFinite { .. } | Error::Io(_) => {
                "data"
            }
            Error::Divergence { .. } | Error::Oracle(_) => "divergence",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
