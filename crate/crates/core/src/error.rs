use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Mismatched lengths, malformed problem shapes, vectors from the wrong model.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("cap `{cap}` exceeded: need {needed}, limit {limit}")]
    CapExceeded {
        cap: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("truncation too small: {0} (enlarge the truncation dimension and retry)")]
    TruncationTooSmall(String),

    #[error("search failed: {0} (not a refutation; enlarge N)")]
    SearchFailed(String),

    /// A construction-time invariant did not hold.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
