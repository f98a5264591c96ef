use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A model parameter violates its invariant.
    #[error("invalid {field}: {reason}")]
    Validation { field: &'static str, reason: String },

    /// An argument lies outside the domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Fixed-point iteration neither converged nor collapsed.
    #[error("no convergence after {iterations} iterations (last iterates {previous:.12e}, {last:.12e})")]
    Convergence {
        iterations: usize,
        previous: f64,
        last: f64,
    },

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature tolerance not met: estimate {estimate:.12e} with error {error:.3e}")]
    Accuracy { estimate: f64, error: f64 },

    /// A root or boundary could not be bracketed.
    #[error("search failed: {0}")]
    Search(String),

    /// More than one candidate root or boundary was found.
    #[error("ambiguous result: {0}")]
    Ambiguous(String),

    /// Config parsing failure.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn search(msg: impl Into<String>) -> Self {
        Error::Search(msg.into())
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation { .. } | Error::Domain(_) | Error::Parse { .. } => 2,
            Error::Convergence { .. }
            | Error::Accuracy { .. }
            | Error::Search(_)
            | Error::Ambiguous(_) => 3,
            Error::Io(_) | Error::Json(_) => 4,
        }
    }
}
