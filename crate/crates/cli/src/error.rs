use kgraph_core::KGraphError;
use thiserror::Error;

/// Problems with a `.kg` document. Positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KgError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("{line}:{column}: duplicate {kind} `{name}` (first declared on line {first})")]
    DuplicateName { line: usize, column: usize, kind: &'static str, name: String, first: usize },

    #[error("{line}:{column}: unknown {kind} `{name}`")]
    UnknownReference { line: usize, column: usize, kind: &'static str, name: String },

    /// The document is well formed but describes an invalid object, e.g.
    /// squares that violate the factorization rules.
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: KGraphError,
    },
}

impl KgError {
    pub fn line(&self) -> usize {
        match self {
            KgError::Syntax { line, .. }
            | KgError::DuplicateName { line, .. }
            | KgError::UnknownReference { line, .. }
            | KgError::Invalid { line, .. } => *line,
        }
    }

    pub fn column(&self) -> Option<usize> {
        match self {
            KgError::Syntax { column, .. }
            | KgError::DuplicateName { column, .. }
            | KgError::UnknownReference { column, .. } => Some(*column),
            KgError::Invalid { .. } => None,
        }
    }
}

/// A decider failed while running a directive.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`analyze {directive}` (line {line}): {source}")]
pub struct RunError {
    pub directive: String,
    /// 0 for directives supplied on the command line.
    pub line: usize,
    #[source]
    pub source: KGraphError,
}
