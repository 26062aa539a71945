use std::path::PathBuf;

use thiserror::Error;

use crate::model::Diagnostic;

/// Failures while ingesting a class-model document.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("schema violation at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("duplicate class name `{0}`")]
    DuplicateClass(String),
    #[error("inheritance cycle: {}", .0.join(" -> "))]
    InheritanceCycle(Vec<String>),
    #[error("invalid class model: {}", join_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
}

fn join_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Lexer and parser failures. Positions are 1-based.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SyntaxError {
    #[error("{line}:{column}: unterminated {what}")]
    Unterminated {
        what: &'static str,
        line: usize,
        column: usize,
    },
    #[error("{line}:{column}: expected {expected}, found `{found}`")]
    Unexpected {
        expected: String,
        found: String,
        line: usize,
        column: usize,
    },
    #[error("{line}:{column}: class `{name}` declared twice in the same file")]
    DuplicateInUnit {
        name: String,
        line: usize,
        column: usize,
    },
}

/// Errors raised while turning sources into a class model.
#[derive(Debug, Error)]
pub enum FrontendError {
    #[error("{path}: {source}")]
    Syntax {
        path: String,
        #[source]
        source: SyntaxError,
    },
    #[error("class `{name}` declared in both {first} and {second}")]
    DuplicateClass {
        name: String,
        first: String,
        second: String,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Error, PartialEq)]
pub enum EstimationError {
    #[error("cannot estimate a project with no classes")]
    EmptyProject,
    #[error("invalid model set: {0}")]
    InvalidModelSet(String),
}

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("singular system: {0}")]
    Singular(String),
}

/// Top-level error for the analysis pipeline; every variant maps to exit status 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Ingest {
        path: PathBuf,
        #[source]
        source: ModelError,
    },
    #[error(transparent)]
    Frontend(#[from] FrontendError),
    #[error(transparent)]
    Estimation(#[from] EstimationError),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error("{path}:{line}: {message}")]
    Csv {
        path: String,
        line: usize,
        message: String,
    },
    #[error("no classes found")]
    NoClasses,
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
