//! The vertex sets `V(n, v) = { s(λ) : λ ∈ vΛᵐ, m ≤ n }` and the frontier
//! `FV(n, v) = V(n, v) \ ∪ᵢ V(n - eᵢ, v)`.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::degree::Degree;
use crate::error::{KGraphError, Result};
use crate::graph::{KGraph, VertexId};
use crate::verdict::{Route, SearchBounds, Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frontier {
    pub vertex: String,
    pub degree: Degree,
    /// `V(n, v)`, sorted by vertex id.
    pub v: Vec<String>,
    /// `FV(n, v)`.
    pub fv: Vec<String>,
    #[serde(skip)]
    pub v_set: FixedBitSet,
    #[serde(skip)]
    pub fv_set: FixedBitSet,
}

/// `V(n, v) = V(n - eᵢ, v)` seen at `at`, and whether
/// `V(at + r·eᵢ) = V(at - eᵢ)` held for every `r ≤ checked`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stabilization {
    pub at: Degree,
    pub color: usize,
    pub checked: u32,
    pub persists: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontierScan {
    pub vertex: String,
    pub max: Degree,
    /// `|V(n, v)|` for every `n` in the box that stays inside the graph.
    pub sizes: Vec<(Degree, usize)>,
    pub stabilizations: Vec<Stabilization>,
    /// Every `s(wΛ^{ℕeᵢ})` infinite, for every `w` and `i`.
    pub growth: Verdict,
    /// Holds when `Λ ×_d ℤᵏ` is certified not cofinal by the growth
    /// hypothesis.
    pub skew_not_cofinal: Verdict,
}

fn require_no_sources(g: &KGraph) -> Result<()> {
    match g.source_witness() {
        Some((v, c)) => Err(KGraphError::Precondition(format!(
            "frontier sets need a graph without sources; `{}` receives no color-{c} edge",
            g.vertex_name(v)
        ))),
        None => Ok(()),
    }
}

/// `V(m, v)` for every `m ≤ n`; entries are `None` where the window is left.
fn v_table(g: &KGraph, v: VertexId, n: &Degree) -> HashMap<Degree, Option<FixedBitSet>> {
    let mut exact: HashMap<Degree, Option<FixedBitSet>> = HashMap::new();
    let mut table: HashMap<Degree, Option<FixedBitSet>> = HashMap::new();
    for m in n.box_below() {
        let here = if m.is_zero() {
            let mut s = g.empty_set();
            s.insert(v);
            Some(s)
        } else {
            let c = (1..=g.rank()).rev().find(|&c| m.get(c) > 0).unwrap();
            let prev = m.minus_unit(c).unwrap();
            exact[&prev].as_ref().and_then(|s| g.step_sources(s, c).ok())
        };
        let mut union = here.clone();
        for c in 1..=g.rank() {
            if let Some(prev) = m.minus_unit(c) {
                union = match (union, &table[&prev]) {
                    (Some(mut u), Some(p)) => {
                        u.union_with(p);
                        Some(u)
                    }
                    _ => None,
                };
            }
        }
        exact.insert(m.clone(), here);
        table.insert(m, union);
    }
    table
}

/// `V(n, v)` and `FV(n, v)`.
pub fn frontier(g: &KGraph, v: VertexId, n: &Degree) -> Result<Frontier> {
    require_no_sources(g)?;
    if n.rank() != g.rank() {
        return Err(KGraphError::RankMismatch { got: n.rank(), rank: g.rank() });
    }
    let table = v_table(g, v, n);
    let Some(v_set) = table[n].clone() else {
        // Rerun the direct enumeration to name the boundary vertex.
        for m in n.box_below() {
            g.sources_of_degree(v, &m)?;
        }
        unreachable!("the table reported a window exit");
    };
    let mut fv_set = v_set.clone();
    for c in 1..=g.rank() {
        if let Some(prev) = n.minus_unit(c) {
            fv_set.difference_with(table[&prev].as_ref().unwrap());
        }
    }
    Ok(Frontier {
        vertex: g.vertex_name(v).to_string(),
        degree: n.clone(),
        v: g.set_names(&v_set),
        fv: g.set_names(&fv_set),
        v_set,
        fv_set,
    })
}

/// `|V(n, v)|` over the box `[0, max]ᵏ`, every stabilization
/// `V(n) = V(n - eᵢ)` with a check that it persists along `eᵢ` inside the
/// box, and the growth hypothesis under `bounds`.
pub fn frontier_scan(g: &KGraph, v: VertexId, max: u32, bounds: &SearchBounds) -> Result<FrontierScan> {
    require_no_sources(g)?;
    let top = Degree::diagonal(g.rank(), max);
    let table = v_table(g, v, &top);
    let mut sizes = Vec::new();
    let mut stabilizations = Vec::new();
    for n in top.box_below() {
        let Some(here) = &table[&n] else { continue };
        sizes.push((n.clone(), here.count_ones(..)));
        for c in 1..=g.rank() {
            let Some(prev) = n.minus_unit(c) else { continue };
            let Some(before) = &table[&prev] else { continue };
            if here != before {
                continue;
            }
            let mut checked = 0;
            let mut persists = true;
            let mut next = n.clone();
            while next.get(c) < max {
                next = next.plus_unit(c);
                match &table[&next] {
                    Some(s) => {
                        checked += 1;
                        persists &= s == before;
                    }
                    None => break,
                }
            }
            stabilizations.push(Stabilization { at: n.clone(), color: c, checked, persists });
        }
    }
    let growth = growth_hypothesis(g, bounds)?;
    let skew_not_cofinal = if growth.is_holds() {
        let mut v = Verdict { route: Route::FrontierGrowth, ..growth.clone() };
        v.notes.push("every frontier FV(n, v) is nonempty, which rules out cofinality of the skew by d over Z^k".into());
        v
    } else {
        Verdict::unknown(
            Route::FrontierGrowth,
            bounds,
            Witness::Note { text: "the growth hypothesis is not established".into() },
        )
    };
    Ok(FrontierScan { vertex: g.vertex_name(v).to_string(), max: top, sizes, stabilizations, growth, skew_not_cofinal })
}

/// Whether `s(wΛ^{ℕeᵢ})` is infinite for every vertex `w` and color `i`.
///
/// A finite graph never satisfies this. On a window, strict growth of
/// `∪_{r ≤ R} s(wΛ^{r·eᵢ})` for `R` up to `max_cofinal_degree` at every
/// vertex that stays inside is reported as Holds up to bounds; vertices
/// that leave the window sooner are skipped.
pub fn growth_hypothesis(g: &KGraph, bounds: &SearchBounds) -> Result<Verdict> {
    require_no_sources(g)?;
    if g.is_finite() {
        return Ok(Verdict::fails(
            Route::Definition,
            Witness::Note { text: "a finite vertex set has only finite subsets".into() },
        ));
    }
    let steps = bounds.max_cofinal_degree.max(1);
    let mut example: Option<Witness> = None;
    let mut interior = 0;
    for w in 0..g.vertex_count() {
        for c in 1..=g.rank() {
            let mut layer = g.empty_set();
            layer.insert(w);
            let mut union = layer.clone();
            let mut sizes = vec![(Degree::zero(g.rank()), 1)];
            let mut inside = true;
            for r in 1..=steps {
                match g.step_sources(&layer, c) {
                    Ok(next) => layer = next,
                    Err(_) => {
                        inside = false;
                        break;
                    }
                }
                let before = union.count_ones(..);
                union.union_with(&layer);
                sizes.push((Degree::unit(g.rank(), c).scale(r), union.count_ones(..)));
                if union.count_ones(..) == before {
                    return Ok(Verdict::unknown(
                        Route::FrontierGrowth,
                        bounds,
                        Witness::Frontier { vertex: g.vertex_name(w).to_string(), sizes },
                    ));
                }
            }
            if inside {
                interior += 1;
                if example.is_none() {
                    example = Some(Witness::Frontier { vertex: g.vertex_name(w).to_string(), sizes });
                }
            }
        }
    }
    match example {
        Some(w) => Ok(Verdict::holds(Route::FrontierGrowth, w)
            .up_to(bounds)
            .note(format!("{interior} interior (vertex, color) pairs grew strictly for {steps} steps"))),
        None => Ok(Verdict::unknown(
            Route::FrontierGrowth,
            bounds,
            Witness::Exhausted { explored: 0, reason: "no vertex stays inside the window long enough".into() },
        )),
    }
}
