//! Aperiodicity: separating-path search, the single-vertex periodicity
//! certificate, degree factorization through a functor, and transfer
//! along r-path-lifting morphisms.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::degree::Degree;
use crate::error::{KGraphError, Result};
use crate::graph::{KGraph, Path, VertexId};
use crate::par;
use crate::semigroup::{Functor, Semigroup};
use crate::skew::{check_r_path_lifting, skew_product, GraphMorphism, Window};
use crate::verdict::{Route, SearchBounds, Verdict, Witness};

/// True when `λ(m, m+d(λ)-(m∨n)) ≠ λ(n, n+d(λ)-(m∨n))`.
pub fn separates(g: &KGraph, lambda: &Path, m: &Degree, n: &Degree) -> Result<bool> {
    let (left, right) = segments(g, lambda, m, n)?;
    Ok(left != right)
}

fn segments(g: &KGraph, lambda: &Path, m: &Degree, n: &Degree) -> Result<(Path, Path)> {
    let j = m.join(n);
    let rest = lambda.degree().checked_sub(&j).ok_or(KGraphError::DegreeOutOfRange {
        lo: j.coords().to_vec(),
        hi: lambda.degree().coords().to_vec(),
        degree: j.coords().to_vec(),
    })?;
    Ok((g.segment(lambda, m, &(m + &rest))?, g.segment(lambda, n, &(n + &rest))?))
}

/// Single vertex with exactly one edge of each color: every degree has a
/// unique path, so all segments of equal degree coincide.
pub fn is_deterministic_single_vertex(g: &KGraph) -> bool {
    g.is_finite() && g.vertex_count() == 1 && (1..=g.rank()).all(|c| g.range_edges(0, c).len() == 1)
}

/// Finite, and every vertex receives exactly one edge of each color. Then
/// each `vΛⁿ` is a single path, and two segments of equal degree agree as
/// soon as they start at the same vertex. Returns `(m, n)` with `m ≠ n`
/// whose segments start at one vertex on the unique path into vertex 0.
pub fn deterministic_repeat(g: &KGraph) -> Option<(Degree, Degree)> {
    let n = g.vertex_count();
    if !g.is_finite() || n == 0 || !(0..n).all(|v| (1..=g.rank()).all(|c| g.range_edges(v, c).len() == 1)) {
        return None;
    }
    let along = |j: u32| Degree::unit(g.rank(), 1).scale(j);
    let mut seen: Vec<Option<u32>> = vec![None; n];
    let mut x = 0;
    for j in 0.. {
        if let Some(i) = seen[x] {
            return Some((along(i), along(j)));
        }
        seen[x] = Some(j);
        x = g.edge(g.range_edges(x, 1)[0]).source;
    }
    unreachable!()
}

enum Search {
    Found { path: Path, left: Path, right: Path },
    NotFound { explored: u64 },
    OutsideWindow,
}

/// Look for a separating path of degree `(m∨n) + r`, `r ≤ (radius,…)`,
/// in graded order. Separation is inherited by extensions, so the first
/// hit is as good as any.
fn separation_search(g: &KGraph, v: VertexId, m: &Degree, n: &Degree, radius: u32, budget: u64) -> Result<Search> {
    let j = m.join(n);
    let mut explored = 0u64;
    let mut any_inside = false;
    for r in Degree::diagonal(g.rank(), radius).box_below() {
        let p = &j + &r;
        let mut found: Option<Result<(Path, Path, Path)>> = None;
        let flow = g.for_each_path_from(v, &p, |word, _| {
            explored += 1;
            let outcome = g.path_from_word(word).and_then(|lambda| {
                let (left, right) = segments(g, &lambda, m, n)?;
                Ok((lambda, left, right))
            });
            match outcome {
                Ok((lambda, left, right)) if left != right => {
                    found = Some(Ok((lambda, left, right)));
                    ControlFlow::Break(())
                }
                Ok(_) if explored >= budget => ControlFlow::Break(()),
                Ok(_) => ControlFlow::Continue(()),
                Err(e) => {
                    found = Some(Err(e));
                    ControlFlow::Break(())
                }
            }
        });
        match flow {
            Err(KGraphError::WindowExceeded { .. }) => continue,
            Err(e) => return Err(e),
            Ok(_) => any_inside = true,
        }
        match found {
            Some(Ok((path, left, right))) => return Ok(Search::Found { path, left, right }),
            Some(Err(e)) => return Err(e),
            None if explored >= budget => break,
            None => {}
        }
    }
    Ok(if any_inside { Search::NotFound { explored } } else { Search::OutsideWindow })
}

fn separation_witness(g: &KGraph, v: VertexId, m: &Degree, n: &Degree, path: &Path, left: &Path, right: &Path) -> Witness {
    Witness::Separation {
        vertex: g.vertex_name(v).to_string(),
        m: m.clone(),
        n: n.clone(),
        path: g.path_repr(path),
        left: g.path_repr(left),
        right: g.path_repr(right),
    }
}

fn separation_radius(g: &KGraph, bounds: &SearchBounds) -> u32 {
    bounds.max_pair_degree.min(bounds.path_depth(g.vertex_count()))
}

/// Decide "no local periodicity at `v` for the pair `(m, n)`".
pub fn no_local_periodicity_at(g: &KGraph, v: VertexId, m: &Degree, n: &Degree, bounds: &SearchBounds) -> Result<Verdict> {
    if m == n {
        return Err(KGraphError::Precondition("the pair of degrees must differ".into()));
    }
    if is_deterministic_single_vertex(g) {
        let w = Witness::Periodicity { vertex: g.vertex_name(v).to_string(), m: m.clone(), n: n.clone() };
        return Ok(Verdict::fails(Route::DeterministicSingleVertex, w));
    }
    let radius = separation_radius(g, bounds);
    Ok(match separation_search(g, v, m, n, radius, bounds.max_steps)? {
        Search::Found { path, left, right } => {
            Verdict::holds(Route::SeparationSearch, separation_witness(g, v, m, n, &path, &left, &right))
        }
        Search::NotFound { explored } => Verdict::unknown(
            Route::SeparationSearch,
            bounds,
            Witness::Exhausted { explored, reason: "no separating path within the search radius".into() },
        ),
        Search::OutsideWindow => Verdict::unknown(
            Route::SeparationSearch,
            bounds,
            Witness::Exhausted { explored: 0, reason: "every candidate path leaves the window".into() },
        ),
    })
}

/// All unordered pairs `m ≠ n` in `[0, max]ᵏ`, in a fixed order.
pub fn degree_pairs(k: usize, max: u32) -> Vec<(Degree, Degree)> {
    let degrees = Degree::diagonal(k, max).box_below();
    let mut out = Vec::new();
    for (i, m) in degrees.iter().enumerate() {
        for n in &degrees[i + 1..] {
            out.push((m.clone(), n.clone()));
        }
    }
    out
}

enum VertexOutcome {
    AllSeparated { first: Option<Witness>, pairs: usize, skipped: usize },
    Stuck { m: Degree, n: Degree, explored: u64 },
}

/// Aperiodicity of a graph on its own: certified failure for finite
/// graphs with one edge of each color into every vertex, otherwise a separating path for
/// every vertex and every pair in the pair box.
pub fn is_aperiodic(g: &KGraph, bounds: &SearchBounds) -> Result<Verdict> {
    if is_deterministic_single_vertex(g) {
        let k = g.rank();
        let (m, n) = if k >= 2 { (Degree::unit(k, 1), Degree::unit(k, 2)) } else { (Degree::unit(1, 1), Degree::zero(1)) };
        let w = Witness::Periodicity { vertex: g.vertex_name(0).to_string(), m, n };
        return Ok(Verdict::fails(Route::DeterministicSingleVertex, w));
    }
    if let Some((m, n)) = deterministic_repeat(g) {
        let w = Witness::Periodicity { vertex: g.vertex_name(0).to_string(), m, n };
        return Ok(Verdict::fails(Route::Deterministic, w));
    }
    let pairs = degree_pairs(g.rank(), bounds.max_pair_degree);
    let radius = separation_radius(g, bounds);
    let vertices: Vec<VertexId> = (0..g.vertex_count()).collect();
    let outcomes = par::map(&vertices, |&v| -> Result<VertexOutcome> {
        let mut first = None;
        let mut done = 0;
        let mut skipped = 0;
        for (m, n) in &pairs {
            match separation_search(g, v, m, n, radius, bounds.max_steps)? {
                Search::Found { path, left, right } => {
                    if first.is_none() {
                        first = Some(separation_witness(g, v, m, n, &path, &left, &right));
                    }
                    done += 1;
                }
                Search::OutsideWindow => skipped += 1,
                Search::NotFound { explored } => {
                    return Ok(VertexOutcome::Stuck { m: m.clone(), n: n.clone(), explored })
                }
            }
        }
        Ok(VertexOutcome::AllSeparated { first, pairs: done, skipped })
    });
    let mut witness = None;
    let (mut checked, mut skipped) = (0usize, 0usize);
    for (v, outcome) in outcomes.into_iter().enumerate() {
        match outcome? {
            VertexOutcome::Stuck { m, n, explored } => {
                return Ok(Verdict::unknown(
                    Route::SeparationSearch,
                    bounds,
                    Witness::Exhausted {
                        explored,
                        reason: format!("no separating path at `{}` for m = {m}, n = {n}", g.vertex_name(v)),
                    },
                ));
            }
            VertexOutcome::AllSeparated { first, pairs, skipped: s } => {
                checked += pairs;
                skipped += s;
                if witness.is_none() {
                    witness = first;
                }
            }
        }
    }
    let Some(witness) = witness else {
        return Ok(Verdict::unknown(
            Route::SeparationSearch,
            bounds,
            Witness::Exhausted { explored: 0, reason: "no vertex has its pair box inside the window".into() },
        ));
    };
    let mut verdict = Verdict::holds(Route::SeparationSearch, witness)
        .up_to(bounds)
        .note(format!("{checked} (vertex, pair) cases separated"));
    if skipped > 0 {
        verdict = verdict.note(format!("{skipped} (vertex, pair) cases left the window and were skipped"));
    }
    Ok(verdict)
}

/// A matrix `Φ` (rows indexed by color) with `Φ·η(e) = d(e)` for every
/// edge, when labels are vectors and such a rational matrix exists. Then
/// `φ = Φ` restricted to the labels of paths takes values in `ℤᵏ` and
/// satisfies `d = φ∘η`.
pub fn degree_factorization(g: &KGraph, eta: &Functor) -> Option<Vec<Vec<BigRational>>> {
    let labels = eta.vector_labels()?;
    let j = eta.semigroup().vector_dim()?;
    let k = g.rank();
    // Solve A x = b_c for every color c, with A the edge-by-coordinate
    // label matrix. Row-reduce [A | B] once.
    let rows = g.edge_count();
    let cols = j + k;
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|e| {
            let mut row: Vec<BigRational> = labels[e].iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
            for c in 1..=k {
                row.push(if g.edge(e).color == c { BigRational::one() } else { BigRational::zero() });
            }
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..j {
        let Some(p) = (r..rows).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let pivot_row = m[r].clone();
                for (a, b) in m[i].iter_mut().zip(&pivot_row) {
                    *a -= &f * b;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows {
            break;
        }
    }
    // Inconsistent if a zero row of A has a nonzero right-hand side.
    if m[r..].iter().any(|row| row[j..cols].iter().any(|x| !x.is_zero())) {
        return None;
    }
    let mut phi = vec![vec![BigRational::zero(); j]; k];
    for (i, &col) in pivots.iter().enumerate() {
        for c in 0..k {
            phi[c][col] = m[i][j + c].clone();
        }
    }
    // Recheck on every edge.
    for (e, label) in labels.iter().enumerate() {
        for (c, row) in phi.iter().enumerate() {
            let value: BigRational = row.iter().zip(label).map(|(a, &x)| a * BigRational::from_integer(BigInt::from(x))).sum();
            let expected = if g.edge(e).color == c + 1 { BigRational::one() } else { BigRational::zero() };
            if value != expected {
                return None;
            }
        }
    }
    Some(phi)
}

/// Aperiodicity of `Λ ×_η S` from data on the base: a degree factorization
/// through `η` certifies it outright; otherwise an aperiodic base does,
/// since the projection has unique r-path lifting. Over a finite group the
/// whole skew product is finite and is checked directly.
pub fn skew_aperiodic(base: &KGraph, eta: &Functor, bounds: &SearchBounds) -> Result<Verdict> {
    if matches!(eta.semigroup(), Semigroup::FreePlus { .. }) {
        return Err(KGraphError::UnsupportedSemigroup("free monoids are not left-reversible".into()));
    }
    if let Some(phi) = degree_factorization(base, eta) {
        let phi = phi.iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect();
        return Ok(Verdict::holds(Route::DegreeFactorization, Witness::DegreeFactorization { phi }));
    }
    let base_verdict = is_aperiodic(base, bounds)?;
    if base_verdict.is_holds() {
        let mut v = Verdict { route: Route::AperiodicBase, ..base_verdict };
        v.notes.push("the projection onto the base has unique r-path lifting".into());
        return Ok(v);
    }
    if let Semigroup::FiniteGroup { .. } = eta.semigroup() {
        let skew = skew_product(base, eta, &Window::All, true)?;
        let mut v = is_aperiodic(skew.graph(), bounds)?;
        v.notes.push(format!("decided on the full skew product via {}", v.route.describe()));
        v.route = Route::FiniteSkewProduct;
        return Ok(v);
    }
    Ok(Verdict::unknown(
        Route::AperiodicBase,
        bounds,
        Witness::Note { text: "no degree factorization and the base is not known to be aperiodic".into() },
    ))
}

/// Aperiodicity of `domain` transferred along an r-path-lifting morphism
/// onto an aperiodic `codomain`. Every transferred witness is re-checked
/// on the lift itself.
pub fn aperiodic_via_lifting(
    p: &GraphMorphism,
    domain: &KGraph,
    codomain: &KGraph,
    bounds: &SearchBounds,
) -> Result<Verdict> {
    let lifting = check_r_path_lifting(p, domain, codomain, false, bounds.max_pair_degree)?;
    if !lifting.is_holds() {
        return Ok(Verdict::unknown(
            Route::PathLifting,
            bounds,
            Witness::Note { text: "r-path lifting could not be confirmed".into() },
        ));
    }
    let target = is_aperiodic(codomain, bounds)?;
    if !target.is_holds() {
        return Ok(Verdict::unknown(
            Route::PathLifting,
            bounds,
            Witness::Note { text: "the codomain is not known to be aperiodic".into() },
        ));
    }
    let pairs = degree_pairs(domain.rank(), bounds.max_pair_degree);
    let radius = separation_radius(codomain, bounds);
    let mut first = None;
    let mut checked = 0usize;
    for v in 0..domain.vertex_count() {
        let pv = p.vertex_map[v];
        for (m, n) in &pairs {
            let Search::Found { path, .. } = separation_search(codomain, pv, m, n, radius, bounds.max_steps)? else {
                continue;
            };
            // Find a lift of the codomain witness starting at v.
            let target_word = path.edges().to_vec();
            let mut lift = None;
            let flow = domain.for_each_path_from(v, path.degree(), |word, _| {
                if p.map_word(word) == target_word {
                    lift = Some(word.to_vec());
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            });
            if let Err(KGraphError::WindowExceeded { .. }) = flow {
                continue;
            }
            let _ = flow?;
            let Some(word) = lift else {
                return Ok(Verdict::unknown(
                    Route::PathLifting,
                    bounds,
                    Witness::Note { text: format!("witness at `{}` has no lift", codomain.vertex_name(pv)) },
                ));
            };
            let lifted = domain.path_from_word(&word)?;
            let (left, right) = segments(domain, &lifted, m, n)?;
            if left == right {
                return Ok(Verdict::unknown(
                    Route::PathLifting,
                    bounds,
                    Witness::Note {
                        text: format!("lifted witness at `{}` does not separate m = {m}, n = {n}", domain.vertex_name(v)),
                    },
                ));
            }
            checked += 1;
            if first.is_none() {
                first = Some(separation_witness(domain, v, m, n, &lifted, &left, &right));
            }
        }
    }
    let witness = first.unwrap_or(Witness::Note { text: "no lifted witnesses inside the window".into() });
    Ok(Verdict::holds(Route::PathLifting, witness)
        .up_to(bounds)
        .note(format!("{checked} lifted witnesses re-checked on the domain")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::semigroup::Element;

    #[test]
    fn t2_is_periodic() {
        let g = builtins::t(2).unwrap();
        let v = is_aperiodic(&g, &SearchBounds::default()).unwrap();
        assert!(v.is_fails() && v.is_exact());
        let m = Degree::from([1, 0]);
        let n = Degree::from([0, 1]);
        assert!(no_local_periodicity_at(&g, 0, &m, &n, &SearchBounds::default()).unwrap().is_fails());
        assert!(no_local_periodicity_at(&g, 0, &m, &m, &SearchBounds::default()).is_err());
    }

    #[test]
    fn delta_window_separates() {
        let g = builtins::delta(2, -2, 2).unwrap();
        let v = g.vertex_id("(0,0)").unwrap();
        let verdict =
            no_local_periodicity_at(&g, v, &Degree::from([1, 0]), &Degree::from([0, 1]), &SearchBounds::default()).unwrap();
        assert!(verdict.is_holds());
    }

    #[test]
    fn factorization_of_degree_labels() {
        let g = builtins::three_vertex();
        assert!(degree_factorization(&g, &Functor::degree(&g)).is_some());
        let b2 = builtins::b2();
        let eta = Functor::from_names(
            &b2,
            Semigroup::Nk { k: 1 },
            &[("e", Element::Vector(vec![1])), ("f", Element::Vector(vec![0]))],
        )
        .unwrap();
        assert!(degree_factorization(&b2, &eta).is_none());
        let t2 = builtins::t(2).unwrap();
        let eta = Functor::from_names(
            &t2,
            Semigroup::Nk { k: 2 },
            &[("f1", Element::Vector(vec![1, 0])), ("f2", Element::Vector(vec![1, 1]))],
        )
        .unwrap();
        let phi = degree_factorization(&t2, &eta).unwrap();
        assert_eq!(phi[0][0].to_string(), "1");
        assert_eq!(phi[0][1].to_string(), "-1");
    }
}
