//! Property deciders. Every decider returns a three-valued [`Verdict`]
//! with a witness; exact routes are tried before bounded searches.
//!
//! [`Verdict`]: crate::verdict::Verdict

pub mod aperiodicity;
pub mod cofinality;
pub mod frontier;
pub mod gamma;
pub mod residue;
pub mod simplicity;
pub mod system;

pub use aperiodicity::{is_aperiodic, no_local_periodicity_at, skew_aperiodic};
pub use cofinality::{cofinal_search, is_cofinal};
pub use frontier::{frontier, frontier_scan, growth_hypothesis, Frontier, FrontierScan};
pub use gamma::{gamma_eta, GammaReport};
pub use simplicity::{simplicity_report, Simplicity, SimplicityReport, Target};
pub use system::{s_primitive, system_cofinal, uniformly_upper_dense, upper_dense};
