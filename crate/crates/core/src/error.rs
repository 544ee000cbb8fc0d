use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A work or memory budget would be exceeded. `partial` carries whatever
    /// progress count was reached before refusing (census size, rows, ...).
    #[error("resource refusal: {reason}{}", partial.map(|p| format!(" (partial size {p})")).unwrap_or_default())]
    ResourceRefusal { reason: String, partial: Option<u64> },

    #[error("uncertified: {0}")]
    Uncertified(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn refusal(reason: impl Into<String>, partial: Option<u64>) -> Self {
        Error::ResourceRefusal {
            reason: reason.into(),
            partial,
        }
    }
}
