use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A single failed check in a scenario, keyed by the field that failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationIssue {
    pub field: String,
    pub message: String,
}

impl ValidationIssue {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("capacity exceeded: dimension {dim} is above the limit of {limit}")]
    Capacity { dim: usize, limit: usize },

    #[error("matrix is not Hermitian (max |M - M^dagger| = {defect:.3e}, tolerance {tol:e})")]
    Hermiticity { defect: f64, tol: f64 },

    #[error(
        "ambiguous eigenvalue grouping: gap {gap:.3e} lies between the grouping tolerance {group_tol:e} and ten times it"
    )]
    AmbiguousGrouping { gap: f64, group_tol: f64 },

    #[error("outcome probability {probability:.3e} is too small to condition on")]
    ZeroProbability { probability: f64 },

    #[error("observables `{a}` and `{b}` do not commute (max |[A, B]| = {defect:.3e})")]
    NonCommuting { a: String, b: String, defect: f64 },

    #[error("unknown observable label `{0}`")]
    UnknownLabel(String),

    #[error("state is not normalized (|norm^2 - 1| = {deviation:.3e})")]
    Normalization { deviation: f64 },

    #[error("the probe register has no measurement stages")]
    NoStage,

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("not a valid density matrix: {0}")]
    InvalidDensity(String),

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("syntax error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Syntax { line: Option<usize>, message: String },

    #[error("validation failed: {}", issues.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Validation { issues: Vec<ValidationIssue> },
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            issues: vec![ValidationIssue::new(field, message)],
        }
    }
}
