//! Cofinality of a k-graph.

use fixedbitset::FixedBitSet;

use crate::algebra::strong_connectivity;
use crate::degree::Degree;
use crate::error::{KGraphError, Result};
use crate::graph::{KGraph, VertexId};
use crate::par;
use crate::verdict::{Route, SearchBounds, Verdict, Witness};

/// Sets `{ s(α) : α ∈ wΛᴺ }` for `N` in the graded box `[0, max]ᵏ`;
/// `None` where the enumeration leaves the window.
fn source_sets(g: &KGraph, w: VertexId, max: u32) -> Vec<(Degree, Option<FixedBitSet>)> {
    Degree::diagonal(g.rank(), max)
        .box_below()
        .into_iter()
        .map(|n| {
            let set = g.sources_of_degree(w, &n).ok();
            (n, set)
        })
        .collect()
}

/// The first `N` (graded order, coordinates `≤ max`) with `vΛs(α) ≠ ∅` for
/// every `α ∈ wΛᴺ`. On a window, reachability is taken inside the window,
/// so a returned `N` is always genuine.
pub fn cofinal_degree_for(g: &KGraph, v: VertexId, w: VertexId, max: u32) -> Option<Degree> {
    let reach = g.reachable_from(v);
    source_sets(g, w, max)
        .into_iter()
        .find(|(_, set)| set.as_ref().is_some_and(|s| s.is_subset(&reach)))
        .map(|(n, _)| n)
}

enum PairOutcome {
    Found(Degree),
    Missing,
    OutsideWindow,
}

/// Cofinality. Exact for finite graphs without sinks or sources (where it
/// coincides with strong connectivity); otherwise a bounded search for a
/// degree `N` per pair of vertices.
pub fn is_cofinal(g: &KGraph, bounds: &SearchBounds) -> Result<Verdict> {
    if let Some((v, c)) = g.source_witness() {
        return Err(KGraphError::Precondition(format!(
            "cofinality needs a graph without sources; `{}` receives no color-{c} edge",
            g.vertex_name(v)
        )));
    }
    if g.is_finite() && !g.has_sinks() {
        let sc = strong_connectivity(g);
        return Ok(Verdict { route: Route::CofinalIffStronglyConnected, ..sc });
    }
    cofinal_search(g, bounds)
}

/// The per-pair search on its own, usable as a cross-check on finite
/// graphs where an exact route also applies.
pub fn cofinal_search(g: &KGraph, bounds: &SearchBounds) -> Result<Verdict> {
    let n = g.vertex_count();
    let reach: Vec<FixedBitSet> = (0..n).map(|v| g.reachable_from(v)).collect();
    let ws: Vec<VertexId> = (0..n).collect();
    let rows = par::map(&ws, |&w| {
        let sets = source_sets(g, w, bounds.max_cofinal_degree);
        let inside = sets.iter().any(|(_, s)| s.is_some());
        (0..n)
            .map(|v| {
                if !inside {
                    return PairOutcome::OutsideWindow;
                }
                sets.iter()
                    .find(|(_, s)| s.as_ref().is_some_and(|s| s.is_subset(&reach[v])))
                    .map_or(PairOutcome::Missing, |(d, _)| PairOutcome::Found(d.clone()))
            })
            .collect::<Vec<_>>()
    });
    let mut max_degree = Degree::zero(g.rank());
    let mut example: Option<(String, String, Degree)> = None;
    let (mut pairs, mut skipped) = (0usize, 0usize);
    for (w, row) in rows.into_iter().enumerate() {
        for (v, outcome) in row.into_iter().enumerate() {
            match outcome {
                PairOutcome::Found(d) => {
                    pairs += 1;
                    max_degree = max_degree.join(&d);
                    if example.is_none() && !d.is_zero() {
                        example = Some((g.vertex_name(v).into(), g.vertex_name(w).into(), d));
                    }
                }
                PairOutcome::OutsideWindow => skipped += 1,
                PairOutcome::Missing => {
                    return Ok(Verdict::unknown(
                        Route::CofinalSearch,
                        bounds,
                        Witness::Exhausted {
                            explored: pairs as u64,
                            reason: format!(
                                "no N <= {} found for v = `{}`, w = `{}`",
                                bounds.max_cofinal_degree,
                                g.vertex_name(v),
                                g.vertex_name(w)
                            ),
                        },
                    ))
                }
            }
        }
    }
    if pairs == 0 {
        return Ok(Verdict::unknown(
            Route::CofinalSearch,
            bounds,
            Witness::Exhausted { explored: 0, reason: "no pair fits inside the window".into() },
        ));
    }
    let mut verdict =
        Verdict::holds(Route::CofinalSearch, Witness::CofinalDegrees { pairs, max_degree, example }).up_to(bounds);
    if skipped > 0 {
        verdict = verdict.note(format!("{skipped} pairs left the window and were skipped"));
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn three_vertex_is_cofinal_both_ways() {
        let g = builtins::three_vertex();
        let exact = is_cofinal(&g, &SearchBounds::default()).unwrap();
        assert!(exact.is_holds() && exact.is_exact());
        let search = cofinal_search(&g, &SearchBounds::default()).unwrap();
        assert!(search.is_holds());
    }

    #[test]
    fn ladder_pair_needs_one_step_right() {
        let g = builtins::ladder(4, 4).unwrap();
        let v = g.vertex_id("(1,0)").unwrap();
        let w = g.vertex_id("(0,1)").unwrap();
        assert_eq!(cofinal_degree_for(&g, v, w, 3), Some(Degree::from([1, 0])));
        let tiny = SearchBounds { max_cofinal_degree: 0, ..SearchBounds::default() };
        assert!(is_cofinal(&g, &tiny).unwrap().is_unknown());
    }

    #[test]
    fn delta_window_is_cofinal_inside() {
        let g = builtins::delta(2, -2, 2).unwrap();
        assert!(is_cofinal(&g, &SearchBounds::default()).unwrap().is_holds());
    }
}
