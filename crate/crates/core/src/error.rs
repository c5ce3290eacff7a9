use thiserror::Error;

use crate::io::{Diagnostic, ProblemFileError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid candidate: {0}")]
    InvalidCandidate(String),

    #[error("unsupported operation: {0}")]
    UnsupportedOperation(String),

    /// A run configuration or parameter value is out of its documented range.
    #[error("configuration error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("unknown parameter `{name}` for {algorithm}; valid names: {}", valid.join(", "))]
    UnknownParameter {
        algorithm: String,
        name: String,
        valid: Vec<String>,
    },

    #[error("unknown algorithm `{0}`; expected one of pso, abc, fa, aco, iwd")]
    UnknownAlgorithm(String),

    #[error("invalid trace: {0}")]
    InvalidTrace(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("unknown problem `{id}`; catalog: {}", catalog.join(", "))]
    NotFound { id: String, catalog: Vec<String> },

    #[error("invalid problem: {}", format_diagnostics(.0))]
    InvalidProblem(Vec<Diagnostic>),

    #[error(transparent)]
    ProblemFile(#[from] ProblemFileError),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

fn format_diagnostics(diagnostics: &[Diagnostic]) -> String {
    diagnostics.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; ")
}
