//! Combinatorial toolkit for higher-rank graphs (k-graphs): construction
//! and validation from factorization squares, component matrices, skew
//! products over semigroups, and certified deciders for connectivity,
//! primitivity, cofinality, aperiodicity and related properties.

pub mod algebra;
pub mod builtins;
pub mod deciders;
pub mod degree;
pub mod error;
pub mod graph;
pub mod lattice;
pub mod par;
pub mod semigroup;
pub mod skew;
pub mod verdict;

pub use degree::Degree;
pub use error::{KGraphError, Result};
pub use graph::{Boundary, Edge, EdgeId, KGraph, Path, PathRepr, Skeleton, Square, ValidationReport, VertexId};
