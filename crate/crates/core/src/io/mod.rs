//! Problem files and the builtin catalog.

mod catalog;
mod validate;
mod xml;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use catalog::{builtin_problem, catalog, CatalogEntry, DEFAULT_DIMENSION, RANDOM_INSTANCE_SEED};
pub use validate::validate_problem;
pub use xml::{parse_problem_xml, serialize_problem_xml, FORMAT_VERSION};

/// Stable diagnostic codes. Serialized as `SCREAMING_SNAKE_CASE`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DiagnosticCode {
    // Document structure.
    MalformedXml,
    UnknownElement,
    UnknownAttribute,
    MissingElement,
    MissingAttribute,
    DuplicateElement,
    UnexpectedText,
    InvalidNumber,
    UnsupportedVersion,
    UnknownObjective,
    DimensionMismatch,
    BadIndex,
    MatrixSizeMismatch,
    // Problem invariants.
    EmptyName,
    ZeroDimension,
    BoundsLengthMismatch,
    NonFiniteBound,
    InvertedBounds,
    ObjectiveMismatch,
    TooFewNodes,
    CityCountMismatch,
    NonFiniteCoordinate,
    NonFiniteDistance,
    NegativeDistance,
    AsymmetricDistance,
    NonzeroDiagonal,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        use DiagnosticCode::*;
        match self {
            MalformedXml => "MALFORMED_XML",
            UnknownElement => "UNKNOWN_ELEMENT",
            UnknownAttribute => "UNKNOWN_ATTRIBUTE",
            MissingElement => "MISSING_ELEMENT",
            MissingAttribute => "MISSING_ATTRIBUTE",
            DuplicateElement => "DUPLICATE_ELEMENT",
            UnexpectedText => "UNEXPECTED_TEXT",
            InvalidNumber => "INVALID_NUMBER",
            UnsupportedVersion => "UNSUPPORTED_VERSION",
            UnknownObjective => "UNKNOWN_OBJECTIVE",
            DimensionMismatch => "DIMENSION_MISMATCH",
            BadIndex => "BAD_INDEX",
            MatrixSizeMismatch => "MATRIX_SIZE_MISMATCH",
            EmptyName => "EMPTY_NAME",
            ZeroDimension => "ZERO_DIMENSION",
            BoundsLengthMismatch => "BOUNDS_LENGTH_MISMATCH",
            NonFiniteBound => "NON_FINITE_BOUND",
            InvertedBounds => "INVERTED_BOUNDS",
            ObjectiveMismatch => "OBJECTIVE_MISMATCH",
            TooFewNodes => "TOO_FEW_NODES",
            CityCountMismatch => "CITY_COUNT_MISMATCH",
            NonFiniteCoordinate => "NON_FINITE_COORDINATE",
            NonFiniteDistance => "NON_FINITE_DISTANCE",
            NegativeDistance => "NEGATIVE_DISTANCE",
            AsymmetricDistance => "ASYMMETRIC_DISTANCE",
            NonzeroDiagonal => "NONZERO_DIAGONAL",
        }
    }
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    pub message: String,
    /// 1-based source line, for diagnostics raised while reading a file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<u32>,
}

impl Diagnostic {
    pub fn new(code: DiagnosticCode, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            line: None,
        }
    }

    pub(crate) fn at(mut self, line: u32) -> Self {
        self.line = Some(line);
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}: {}", self.code, self.message),
            None => write!(f, "{}: {}", self.code, self.message),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemFileErrorKind {
    /// Not well-formed XML.
    Parse,
    /// Well-formed but does not follow the problem schema.
    Schema,
    /// Follows the schema but violates a problem invariant.
    Semantic,
}

#[derive(Clone, Debug, PartialEq, Error)]
#[error("{} error: {}", kind_name(.kind), .diagnostics.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
pub struct ProblemFileError {
    pub kind: ProblemFileErrorKind,
    pub diagnostics: Vec<Diagnostic>,
}

fn kind_name(kind: &ProblemFileErrorKind) -> &'static str {
    match kind {
        ProblemFileErrorKind::Parse => "parse",
        ProblemFileErrorKind::Schema => "schema",
        ProblemFileErrorKind::Semantic => "semantic",
    }
}

impl ProblemFileError {
    pub(crate) fn schema(diagnostic: Diagnostic) -> Self {
        Self {
            kind: ProblemFileErrorKind::Schema,
            diagnostics: vec![diagnostic],
        }
    }

    pub fn codes(&self) -> Vec<DiagnosticCode> {
        self.diagnostics.iter().map(|d| d.code).collect()
    }
}
