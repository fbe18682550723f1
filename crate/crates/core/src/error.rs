use thiserror::Error;

use crate::config::Configuration;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal consistency violated: {0}")]
    Internal(String),

    #[error("search cap of {cap} reached without a feasible configuration (lower bound {lower})")]
    SearchCap { cap: usize, lower: usize },

    #[error("traversal budget exhausted before any complete representation was reached")]
    SearchExhausted { fallback: Box<Configuration> },

    #[error("sequence is not successive: {0}")]
    NotSuccessive(String),

    #[error("malformed configuration: {0}")]
    MalformedConfiguration(String),

    #[error("corrupt catalog: {0}")]
    CorruptCatalog(String),

    #[error("refusing to emit constraints: {0}")]
    RefuseToEmit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SearchCap { .. } | Error::SearchExhausted { .. } => 2,
            Error::Internal(_) => 3,
            _ => 1,
        }
    }
}
