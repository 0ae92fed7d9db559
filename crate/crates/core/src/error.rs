use thiserror::Error;

use crate::graph::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KGraphError {
    #[error("rank must be between 1 and {max}, got {got}")]
    BadRank { got: usize, max: usize },

    #[error("color {color} out of range for rank {rank}")]
    BadColor { color: usize, rank: usize },

    #[error("duplicate {kind} name `{name}`")]
    DuplicateName { kind: &'static str, name: String },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown edge `{0}`")]
    UnknownEdge(String),

    #[error("malformed square #{index} ({rule}): {reason}")]
    MalformedSquare {
        index: usize,
        rule: String,
        reason: String,
    },

    #[error("factorization rules are invalid: {0}")]
    InvalidRules(Box<ValidationReport>),

    #[error("paths are not composable: source `{source_vertex}` differs from range `{range_vertex}`")]
    NotComposable {
        source_vertex: String,
        range_vertex: String,
    },

    #[error("degree out of range: need {lo:?} <= {hi:?} <= {degree:?}")]
    DegreeOutOfRange {
        lo: Vec<u32>,
        hi: Vec<u32>,
        degree: Vec<u32>,
    },

    #[error("degree has {got} coordinates, graph has rank {rank}")]
    RankMismatch { got: usize, rank: usize },

    #[error("operation leaves the window at vertex `{vertex}` in color {color}")]
    WindowExceeded { vertex: String, color: usize },

    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),

    #[error("bad parameters for builtin `{name}`: {reason}")]
    BadParams { name: String, reason: String },

    #[error("component matrices M{i} and M{j} do not commute")]
    NonCommuting { i: usize, j: usize },

    #[error("operation requires a 1-graph, got rank {0}")]
    NotRank1(usize),

    #[error("graph is not strongly connected")]
    NotStronglyConnected,

    #[error("graph has sinks (vertex `{vertex}` is the source of no color-{color} edge)")]
    HasSinks { vertex: String, color: usize },

    #[error("graph is window-generated; operation needs a finite graph")]
    NotFinite,

    #[error("unsupported semigroup: {0}")]
    UnsupportedSemigroup(String),

    #[error("invalid semigroup element: {0}")]
    InvalidElement(String),

    #[error("invalid semigroup: {0}")]
    InvalidSemigroup(String),

    #[error("edge `{edge}` from fiber {fiber} leaves the window")]
    WindowNotClosed { edge: String, fiber: String },

    #[error("invalid functor: {0}")]
    InvalidFunctor(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = KGraphError> = std::result::Result<T, E>;
