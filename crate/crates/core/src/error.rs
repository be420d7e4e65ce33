use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    /// A value outside the domain of an operation, e.g. an empty universe.
    #[error("domain error: {0}")]
    Domain(String),
    /// Arguments that do not fit together, e.g. boards over different vocabularies.
    #[error("usage error: {0}")]
    Usage(String),
}
