//! The `.kg` text format: parsing, printing, building the
//! described k-graph, running `analyze` directives and emitting reports.

pub mod document;
pub mod error;
pub mod model;
pub mod parse;
pub mod print;
pub mod report;
pub mod run;

pub use document::KgDocument;
pub use error::{KgError, RunError};
pub use model::Model;
pub use parse::parse_kg;
pub use print::{graph_to_kg, print_kg};
pub use report::{emit, Format, Report};
pub use run::{default_directives, run, Overrides};
