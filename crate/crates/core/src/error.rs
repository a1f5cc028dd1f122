use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("invalid relation: {0}")]
    InvalidRelation(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("invalid operation: {0}")]
    InvalidOperation(String),

    #[error("unsupported arity {arity}: {context}")]
    UnsupportedArity { arity: usize, context: &'static str },

    #[error("operation is not closed on the subset: {0}")]
    NotClosed(String),

    #[error("inconsistent query: {0}")]
    QueryConflict(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("witness not found: {0}")]
    WitnessNotFound(String),

    #[error("internal check failed: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
