use thiserror::Error;

/// Errors raised by the word calculus, the tree layer and the analysis engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HnnError {
    /// An instance oracle was asked for something outside its contract,
    /// e.g. `theta` applied to an element that is not in `H`.
    #[error("presentation contract violated: {0}")]
    OracleContract(String),

    #[error("cannot parse token `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// A bounded enumeration hit its configured cap before finishing.
    #[error("resource limit exceeded while {what}: stopped at {partial} items (limit {limit})")]
    ResourceLimit {
        what: String,
        partial: usize,
        limit: usize,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl HnnError {
    pub(crate) fn parse(token: &str, reason: impl Into<String>) -> Self {
        HnnError::Parse {
            token: token.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = HnnError> = std::result::Result<T, E>;
