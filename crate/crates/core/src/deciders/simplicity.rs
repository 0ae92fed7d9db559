//! Simplicity reports: each target is reduced to combinatorial conditions
//! through a known equivalence, the conditions are decided, and the chain
//! of steps is kept for the report.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::is_primitive;
use crate::deciders::aperiodicity::{is_aperiodic, skew_aperiodic};
use crate::deciders::cofinality::is_cofinal;
use crate::deciders::frontier::growth_hypothesis;
use crate::deciders::gamma::gamma_eta;
use crate::deciders::system::system_cofinal;
use crate::error::{KGraphError, Result};
use crate::graph::KGraph;
use crate::semigroup::Functor;
use crate::verdict::{Scope, SearchBounds, Status, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// `C*(Λ)`.
    CstarOfGraph,
    /// `C*(Λ ×_η S)`.
    CstarOfSkew,
    /// The fixed-point algebra of the coaction induced by `η: Λ → G`.
    FixedPointAlgebra,
    /// The gauge-invariant AF core, i.e. the fixed-point algebra for `d`.
    AfCore,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::CstarOfGraph => "graph",
            Target::CstarOfSkew => "skew",
            Target::FixedPointAlgebra => "fixed-point",
            Target::AfCore => "af-core",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = KGraphError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graph" => Ok(Target::CstarOfGraph),
            "skew" => Ok(Target::CstarOfSkew),
            "fixed-point" => Ok(Target::FixedPointAlgebra),
            "af-core" => Ok(Target::AfCore),
            other => Err(KGraphError::Precondition(format!(
                "unknown simplicity target `{other}` (expected graph, skew, fixed-point or af-core)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Simplicity {
    Simple,
    NotSimple,
    Unknown,
}

/// One decided condition in a derivation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub claim: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicityReport {
    pub target: Target,
    pub status: Simplicity,
    pub scope: Scope,
    /// The equivalence the decision rests on.
    pub basis: String,
    pub chain: Vec<Step>,
    /// The first undecided condition, when the status is Unknown.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocking: Option<String>,
}

fn step(claim: &str, verdict: Verdict) -> Step {
    Step { claim: claim.to_string(), verdict }
}

/// Simple iff every step holds.
fn conjunction(target: Target, basis: &str, chain: Vec<Step>) -> SimplicityReport {
    let (status, scope, blocking) = if let Some(s) = chain.iter().find(|s| s.verdict.is_fails()) {
        (Simplicity::NotSimple, s.verdict.scope, None)
    } else if let Some(s) = chain.iter().find(|s| s.verdict.is_unknown()) {
        (Simplicity::Unknown, Scope::UpToBounds, Some(s.claim.clone()))
    } else {
        let exact = chain.iter().all(|s| s.verdict.is_exact());
        (Simplicity::Simple, if exact { Scope::Exact } else { Scope::UpToBounds }, None)
    };
    SimplicityReport { target, status, scope, basis: basis.to_string(), chain, blocking }
}

fn require_no_sources(g: &KGraph) -> Result<()> {
    match g.source_witness() {
        Some((v, c)) => Err(KGraphError::HypothesisUnmet(format!(
            "no sources (`{}` receives no color-{c} edge)",
            g.vertex_name(v)
        ))),
        None => Ok(()),
    }
}

fn require_functor(eta: Option<&Functor>) -> Result<&Functor> {
    eta.ok_or_else(|| KGraphError::HypothesisUnmet("a functor η (declare a semigroup and labels)".into()))
}

/// Decide simplicity of `target`. `eta` is needed for the skew and
/// fixed-point targets and ignored otherwise.
pub fn simplicity_report(
    target: Target,
    g: &KGraph,
    eta: Option<&Functor>,
    bounds: &SearchBounds,
) -> Result<SimplicityReport> {
    require_no_sources(g)?;
    match target {
        Target::CstarOfGraph => {
            let chain = vec![step("Λ is cofinal", is_cofinal(g, bounds)?), step("Λ is aperiodic", is_aperiodic(g, bounds)?)];
            Ok(conjunction(target, "C*(Λ) is simple iff Λ is cofinal and aperiodic (Λ without sources)", chain))
        }
        Target::CstarOfSkew => {
            let eta = require_functor(eta)?;
            let chain = vec![
                step("(Λ, S, η) is cofinal", system_cofinal(g, eta, bounds)?),
                step("Λ ×_η S is aperiodic", skew_aperiodic(g, eta, bounds)?),
            ];
            Ok(conjunction(
                target,
                "C*(Λ ×_η S) is simple iff the skew product is cofinal and aperiodic; \
                 the skew product is cofinal iff the system (Λ, S, η) is",
                chain,
            ))
        }
        Target::FixedPointAlgebra => {
            let eta = require_functor(eta)?;
            if !eta.semigroup().is_group() {
                return Err(KGraphError::HypothesisUnmet(format!(
                    "η must take values in a group, not in {}",
                    eta.semigroup().name()
                )));
            }
            fixed_point(target, g, eta, bounds)
        }
        Target::AfCore => {
            if g.is_finite() && !g.has_sinks() {
                let prim = is_primitive(g)?;
                let d = Functor::degree_into_zk(g);
                let cof = system_cofinal(g, &d, bounds)?;
                let status = match (prim.status, cof.status) {
                    (Status::Holds, _) => Simplicity::Simple,
                    (Status::Fails, _) => Simplicity::NotSimple,
                    _ => Simplicity::Unknown,
                };
                let scope = if prim.is_exact() { Scope::Exact } else { Scope::UpToBounds };
                let chain = vec![step("Λ is primitive", prim), step("(Λ, ℤᵏ, d) is cofinal", cof)];
                return Ok(SimplicityReport {
                    target,
                    status,
                    scope,
                    basis: "for finite Λ without sinks or sources the AF core is simple iff Λ is primitive; \
                            equivalently iff (Λ, ℤᵏ, d) is cofinal"
                        .into(),
                    blocking: (status == Simplicity::Unknown).then(|| "Λ is primitive".to_string()),
                    chain,
                });
            }
            if g.is_finite() {
                return Err(KGraphError::HypothesisUnmet(
                    "no sinks (needed to reduce AF-core simplicity to primitivity)".into(),
                ));
            }
            let d = Functor::degree_into_zk(g);
            let aper = is_aperiodic(g, bounds)?;
            if aper.is_fails() {
                return Err(KGraphError::HypothesisUnmet("an aperiodic base graph".into()));
            }
            let growth = growth_hypothesis(g, bounds)?;
            let gamma = gamma_eta(g, &d, bounds.max_pair_degree)?.verdict;
            let mut chain = vec![step("Λ is aperiodic", aper.clone()), step("Γ(d) = ℤᵏ", gamma)];
            let status = if growth.is_holds() && aper.is_holds() {
                Simplicity::NotSimple
            } else {
                Simplicity::Unknown
            };
            let blocking = match status {
                Simplicity::Unknown if !aper.is_holds() => Some("Λ is aperiodic".to_string()),
                Simplicity::Unknown => Some("every s(wΛ^{ℕeᵢ}) is infinite".to_string()),
                _ => None,
            };
            let scope = if status == Simplicity::NotSimple && aper.is_exact() && growth.is_exact() {
                Scope::Exact
            } else {
                Scope::UpToBounds
            };
            chain.push(step("every s(wΛ^{ℕeᵢ}) is infinite, so Λ ×_d ℤᵏ is not cofinal", growth));
            Ok(SimplicityReport {
                target,
                status,
                scope,
                basis: "with Λ aperiodic and Γ(d) = ℤᵏ, the AF core is simple iff Λ ×_d ℤᵏ is cofinal".into(),
                chain,
                blocking,
            })
        }
    }
}

fn fixed_point(target: Target, g: &KGraph, eta: &Functor, bounds: &SearchBounds) -> Result<SimplicityReport> {
    let basis = "with Λ aperiodic: C*(Λ ×_η G) is simple iff (Λ, G, η) is cofinal, \
                 and iff the fixed-point algebra is simple and Γ(η) = G";
    let aper = is_aperiodic(g, bounds)?;
    if aper.is_fails() {
        return Err(KGraphError::HypothesisUnmet("an aperiodic base graph".into()));
    }
    let gamma = gamma_eta(g, eta, bounds.max_pair_degree)?.verdict;
    let cof = system_cofinal(g, eta, bounds)?;
    let (status, blocking) = if !aper.is_holds() {
        (Simplicity::Unknown, Some("Λ is aperiodic".to_string()))
    } else if cof.is_holds() {
        (Simplicity::Simple, None)
    } else if cof.is_fails() && gamma.is_holds() {
        (Simplicity::NotSimple, None)
    } else if cof.is_fails() {
        (Simplicity::Unknown, Some("Γ(η) = G".to_string()))
    } else {
        (Simplicity::Unknown, Some("(Λ, G, η) is cofinal".to_string()))
    };
    let decisive = [&aper, &cof].into_iter().chain((status == Simplicity::NotSimple).then_some(&gamma));
    let exact = decisive.into_iter().all(Verdict::is_exact);
    let scope = if status != Simplicity::Unknown && exact { Scope::Exact } else { Scope::UpToBounds };
    let chain = vec![step("Λ is aperiodic", aper), step("Γ(η) = G", gamma), step("(Λ, G, η) is cofinal", cof)];
    Ok(SimplicityReport { target, status, scope, basis: basis.into(), chain, blocking })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn af_core_of_three_vertex_is_not_simple() {
        let g = builtins::three_vertex();
        let r = simplicity_report(Target::AfCore, &g, None, &SearchBounds::default()).unwrap();
        assert_eq!(r.status, Simplicity::NotSimple);
        assert_eq!(r.scope, Scope::Exact);
    }

    #[test]
    fn af_core_of_single_vertex_is_simple() {
        let g = builtins::f2_theta(2, 2, &[0, 1, 2, 3]).unwrap();
        let r = simplicity_report(Target::AfCore, &g, None, &SearchBounds::default()).unwrap();
        assert_eq!(r.status, Simplicity::Simple);
    }

    #[test]
    fn delta_window_algebra_is_simple_up_to_bounds() {
        let g = builtins::delta(2, -3, 3).unwrap();
        let r = simplicity_report(Target::CstarOfGraph, &g, None, &SearchBounds::default()).unwrap();
        assert_eq!(r.status, Simplicity::Simple, "{r:?}");
        assert_eq!(r.scope, Scope::UpToBounds);
    }

    #[test]
    fn skew_target_needs_a_functor() {
        let g = builtins::b2();
        let e = simplicity_report(Target::CstarOfSkew, &g, None, &SearchBounds::default()).unwrap_err();
        assert!(matches!(e, KGraphError::HypothesisUnmet(_)));
    }
}
