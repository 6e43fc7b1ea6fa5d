use thiserror::Error;

#[derive(Debug, Error)]
pub enum NrdError {
    /// A caller supplied an argument outside the operation's contract.
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("unknown name: {0}")]
    Lookup(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A search budget ran out before the search finished. `lower_bound`
    /// carries the best value certified so far, when the search has one.
    #[error("budget exceeded: {what}")]
    Budget {
        what: String,
        lower_bound: Option<usize>,
    },

    /// An invariant that should be guaranteed by construction was violated.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = NrdError> = std::result::Result<T, E>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(NrdError::Argument(msg.into()))
}
