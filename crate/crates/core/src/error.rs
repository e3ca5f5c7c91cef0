use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("union over an empty window of graphs")]
    EmptyWindow,

    #[error("arc ({src}, {dst}) appears with both signs")]
    SignConflict { src: usize, dst: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid value for `{field}`: {reason}")]
    Validation { field: String, reason: String },

    #[error("state magnitude exceeded {cap:e} at slot {t}")]
    NumericOverflow { t: u64, cap: f64 },

    #[error("enumeration over {arcs} arcs exceeds the limit of {limit}")]
    TooLarge { arcs: usize, limit: usize },

    #[error("rho_star = {rho} is not positive; alpha must lie in (0, 1/(n-1))")]
    InvalidAlpha { rho: f64 },

    #[error("assumption violated: {0}")]
    AssumptionViolated(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("{path}: {msg}")]
    Io { path: PathBuf, msg: String },
}

impl Error {
    pub fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, err: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            msg: err.to_string(),
        }
    }

    /// Configuration problems (as opposed to run-time or verdict failures).
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::Validation { .. }
                | Error::InvalidGraph(_)
                | Error::SignConflict { .. }
                | Error::EmptyWindow
                | Error::UnknownSuite(_)
                | Error::Io { .. }
        )
    }
}
