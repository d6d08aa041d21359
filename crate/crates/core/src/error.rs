use thiserror::Error;

use crate::angles::Angle;

/// Errors raised across the crate.
///
/// The variants map onto process exit codes in the command line tool:
/// argument and precondition failures exit with 2, numeric failures with 3
/// and I/O failures with 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("ray of angle {angle} does not land where expected: {reason}")]
    Landing { angle: Angle, reason: String },

    #[error("point {re:+.6e}{im:+.6e}i lies on a puzzle boundary")]
    OnBoundary { re: f64, im: f64 },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("solver did not converge after {iterations} iterations (relative residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Argument(_) | Error::Precondition(_) | Error::Parse(_) => 2,
            Error::Landing { .. }
            | Error::OnBoundary { .. }
            | Error::Numeric(_)
            | Error::NoConvergence { .. }
            | Error::Internal(_) => 3,
            Error::Io(_) | Error::Json(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
