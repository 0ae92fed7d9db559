//! Conditions on a functor `η: Λ → S`: upper density (two readings),
//! S-primitivity, and cofinality of the system `(Λ, S, η)`.
//!
//! Upper density asks for `N` with `b·η(wΛᴺ) ≥_l a`. [`upper_dense`] reads
//! this as "some element of the set dominates `a`";
//! [`uniformly_upper_dense`] as "every element does". Cofinality of the
//! system implies the uniform reading, and the uniform reading together
//! with S-primitivity implies cofinality.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;

use crate::algebra::{is_primitive, skeleton_adjacency, strong_connectivity, tarjan_scc};
use crate::deciders::cofinality::is_cofinal;
use crate::deciders::gamma::gamma_eta;
use crate::deciders::residue::Potentials;
use crate::degree::Degree;
use crate::error::{KGraphError, Result};
use crate::graph::{KGraph, VertexId};
use crate::par;
use crate::semigroup::{validate_functor, Element, Functor, Semigroup};
use crate::skew::{skew_product, Window};
use crate::verdict::{Route, Scope, SearchBounds, Verdict, Witness};

type LabelSet = HashSet<(VertexId, Element)>;

/// Cap on `(vertex, label)` states in label searches.
const MAX_STATES: usize = 4_000_000;

fn check_inputs(g: &KGraph, eta: &Functor) -> Result<()> {
    if let Semigroup::FreePlus { .. } = eta.semigroup() {
        return Err(KGraphError::UnsupportedSemigroup(format!(
            "{} is not left-reversible",
            eta.semigroup().name()
        )));
    }
    if eta.labels().len() != g.edge_count() {
        return Err(KGraphError::InvalidFunctor("functor belongs to another graph".into()));
    }
    let report = validate_functor(g, eta);
    if let Some(v) = report.violations.first() {
        return Err(KGraphError::InvalidFunctor(format!("labels break square {}: {} vs {}", v.square, v.left, v.right)));
    }
    Ok(())
}

fn require_no_sources(g: &KGraph) -> Result<()> {
    match g.source_witness() {
        Some((v, c)) => Err(KGraphError::Precondition(format!(
            "the graph has a source: `{}` receives no color-{c} edge",
            g.vertex_name(v)
        ))),
        None => Ok(()),
    }
}

fn vec_elem(v: Vec<i64>) -> Element {
    Element::Vector(v)
}

/// One step of color `c` away from the range: `(x, l) ↦ (s(e), l·η(e))`.
fn advance(g: &KGraph, eta: &Functor, set: &LabelSet, color: usize) -> Result<LabelSet> {
    let s = eta.semigroup();
    let mut next = LabelSet::new();
    for (x, l) in set {
        if g.boundary().is_some_and(|b| b.range_clipped_in(*x, color)) {
            return Err(KGraphError::WindowExceeded { vertex: g.vertex_name(*x).to_string(), color });
        }
        for &e in g.range_edges(*x, color) {
            next.insert((g.edge(e).source, s.multiply(l, eta.label(e))?));
        }
    }
    Ok(next)
}

/// `{ (s(α), η(α)) : α ∈ wΛ^{(m,…,m)} }` for `m = 0..=max`, stopping early
/// when the state count explodes or the window is left.
fn diagonal_label_sets(g: &KGraph, eta: &Functor, w: VertexId, max: u32) -> Vec<LabelSet> {
    let mut out = Vec::new();
    let mut set: LabelSet = [(w, eta.semigroup().identity())].into_iter().collect();
    for m in 0..=max {
        out.push(set.clone());
        if m == max {
            break;
        }
        for c in 1..=g.rank() {
            match advance(g, eta, &set, c) {
                Ok(next) if next.len() <= MAX_STATES / 16 => set = next,
                _ => return out,
            }
        }
    }
    out
}

/// All `(x, η(β))` with `β ∈ vΛx`, restricted to labels accepted by `keep`
/// and to at most `max_len` edges. `None` if the state cap is hit.
pub(crate) fn reach_labels(
    g: &KGraph,
    eta: &Functor,
    v: VertexId,
    keep: &(dyn Fn(&Element) -> bool + Sync),
    max_len: Option<u32>,
) -> Option<LabelSet> {
    let s = eta.semigroup();
    let start = (v, s.identity());
    let mut seen: LabelSet = [start.clone()].into_iter().collect();
    let mut layer = vec![start];
    let mut depth = 0;
    while !layer.is_empty() && max_len.is_none_or(|d| depth < d) {
        let mut next = Vec::new();
        for (x, l) in &layer {
            for c in 1..=g.rank() {
                for &e in g.range_edges(*x, c) {
                    let Ok(label) = s.multiply(l, eta.label(e)) else { continue };
                    if !keep(&label) {
                        continue;
                    }
                    let state = (g.edge(e).source, label);
                    if seen.insert(state.clone()) {
                        next.push(state);
                    }
                }
            }
        }
        if seen.len() > MAX_STATES {
            return None;
        }
        layer = next;
        depth += 1;
    }
    Some(seen)
}

pub(crate) fn in_box<'a>(lo: &'a [i64], hi: &'a [i64]) -> impl Fn(&Element) -> bool + Sync + 'a {
    move |x| x.as_vector().is_some_and(|v| v.iter().zip(lo.iter().zip(hi)).all(|(c, (a, b))| a <= c && c <= b))
}

fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for (&a, &b) in lo.iter().zip(hi) {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (a..=b).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

fn max_abs_label(labels: &[Vec<i64>]) -> i64 {
    labels.iter().flatten().map(|x| x.abs()).max().unwrap_or(0).max(1)
}

/// Largest `B` with `n·(2B+1)ʲ` (or `n·(B+1)ʲ`) below the state cap.
fn box_limit(n: usize, j: usize, symmetric: bool) -> i64 {
    let per = (MAX_STATES / n.max(1)) as f64;
    let side = per.powf(1.0 / j.max(1) as f64).floor() as i64;
    if symmetric {
        ((side - 1) / 2).max(1)
    } else {
        (side - 1).max(1)
    }
}

/// The largest set of vertices from which a diagonal step `(1,…,1)` can be
/// taken using only edges with zero `i`-th label coordinate and staying in
/// the set. Labels must be non-negative vectors. On a window only visible
/// edges are used, which can only shrink the set.
pub fn zero_growth_set(g: &KGraph, labels: &[Vec<i64>], i: usize) -> FixedBitSet {
    let n = g.vertex_count();
    let step = |x: VertexId| -> FixedBitSet {
        let mut set = g.empty_set();
        set.insert(x);
        for c in 1..=g.rank() {
            let mut next = g.empty_set();
            for y in set.ones() {
                for &e in g.range_edges(y, c) {
                    if labels[e][i] == 0 {
                        next.insert(g.edge(e).source);
                    }
                }
            }
            set = next;
        }
        set
    };
    let steps: Vec<FixedBitSet> = (0..n).map(step).collect();
    let mut z = g.empty_set();
    z.insert_range(..);
    loop {
        let mut next = g.empty_set();
        for x in z.ones() {
            if !steps[x].is_disjoint(&z) {
                next.insert(x);
            }
        }
        if next == z {
            return z;
        }
        z = next;
    }
}

fn zero_growth(g: &KGraph, labels: &[Vec<i64>], j: usize) -> Option<(usize, FixedBitSet)> {
    (0..j).find_map(|i| {
        let z = zero_growth_set(g, labels, i);
        (!z.is_clear()).then_some((i, z))
    })
}

fn zero_growth_witness(g: &KGraph, s: &Semigroup, j: usize, i: usize, z: &FixedBitSet) -> Witness {
    let w = z.ones().next().unwrap();
    let mut a = vec![0; j];
    a[i] = 1;
    Witness::ZeroGrowth {
        coordinate: i + 1,
        vertices: g.set_names(z),
        vertex: g.vertex_name(w).to_string(),
        a: s.format(&vec_elem(a)),
        b: s.format(&vec_elem(vec![0; j])),
    }
}

/// Pairs `(a, b)` sampled for universally quantified semigroup elements.
fn sample_pairs(s: &Semigroup, r: i64) -> Vec<(Element, Element)> {
    match s {
        Semigroup::Nk { k } | Semigroup::Zk { k } => box_points(&vec![-r; *k], &vec![r; *k])
            .into_iter()
            .map(|c| {
                let a = c.iter().map(|&x| (-x).max(0)).collect();
                let b = c.iter().map(|&x| x.max(0)).collect();
                (vec_elem(a), vec_elem(b))
            })
            .collect(),
        Semigroup::FiniteGroup { group } => (0..group.order()).map(|g| (s.identity(), Element::Group(g))).collect(),
        Semigroup::AffineNN => {
            let pts: Vec<Element> = (0..=r).flat_map(|m| (1..=r.max(1)).map(move |n| Element::affine(m, n))).collect();
            pts.iter().flat_map(|a| pts.iter().map(move |b| (a.clone(), b.clone()))).collect()
        }
        Semigroup::FreePlus { .. } => Vec::new(),
    }
}

/// Thresholds `a` (with `b` the identity) sampled for upper density.
fn sample_thresholds(s: &Semigroup, r: i64) -> Vec<(Element, Element)> {
    match s {
        Semigroup::Nk { k } => box_points(&vec![0; *k], &vec![r; *k]).into_iter().map(|a| (vec_elem(a), s.identity())).collect(),
        _ => sample_pairs(s, r),
    }
}

/// Bounded search for upper density in either reading, along diagonal
/// degrees (the set of good `N` is upward closed in both readings).
fn upper_dense_search(g: &KGraph, eta: &Functor, bounds: &SearchBounds, uniform: bool) -> Result<Verdict> {
    let s = eta.semigroup();
    let samples = sample_thresholds(s, bounds.sample_radius);
    let ws: Vec<VertexId> = (0..g.vertex_count()).collect();
    let results = par::map(&ws, |&w| -> Result<Option<Option<u32>>> {
        let sets = diagonal_label_sets(g, eta, w, bounds.max_cofinal_degree);
        if sets.len() <= 1 && bounds.max_cofinal_degree > 0 {
            return Ok(None);
        }
        let mut worst = 0;
        for (a, b) in &samples {
            let mut found = None;
            for (m, set) in sets.iter().enumerate() {
                let mut hits = set.iter().map(|(_, l)| s.multiply(b, l).and_then(|bl| s.geq_l(&bl, a)));
                let ok = if uniform { hits.try_fold(true, |acc, h| Ok::<_, KGraphError>(acc && h?))? } else {
                    hits.try_fold(false, |acc, h| Ok::<_, KGraphError>(acc || h?))?
                };
                if ok {
                    found = Some(m as u32);
                    break;
                }
            }
            match found {
                Some(m) => worst = worst.max(m),
                None => return Ok(Some(None)),
            }
        }
        Ok(Some(Some(worst)))
    });
    let mut instances = 0;
    let mut max_m = 0;
    let mut skipped = 0;
    for (w, r) in results.into_iter().enumerate() {
        match r? {
            None => skipped += 1,
            Some(None) => {
                return Ok(Verdict::unknown(
                    Route::DirectSearch,
                    bounds,
                    Witness::Exhausted {
                        explored: instances as u64,
                        reason: format!("no N found at `{}` for some sampled (a, b)", g.vertex_name(w)),
                    },
                ))
            }
            Some(Some(m)) => {
                instances += samples.len();
                max_m = max_m.max(m);
            }
        }
    }
    if instances == 0 {
        return Ok(Verdict::unknown(
            Route::DirectSearch,
            bounds,
            Witness::Exhausted { explored: 0, reason: "no vertex fits inside the window".into() },
        ));
    }
    let mut v = Verdict::holds(
        Route::DirectSearch,
        Witness::SystemPairs { instances, max_degree: Degree::diagonal(g.rank(), max_m) },
    )
    .up_to(bounds);
    if skipped > 0 {
        v = v.note(format!("{skipped} vertices left the window and were skipped"));
    }
    Ok(v)
}

/// Achievable sets of growing coordinates along chains of strongly
/// connected components, as bit masks (maximal ones only).
fn recurrent_masks(g: &KGraph, labels: &[Vec<i64>]) -> (Vec<usize>, Vec<Vec<u64>>) {
    let comps = tarjan_scc(&skeleton_adjacency(g));
    let mut comp_of = vec![0; g.vertex_count()];
    for (c, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = c;
        }
    }
    let mut own = vec![0u64; comps.len()];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
    for (e, edge) in g.skeleton().edges().iter().enumerate() {
        let (cr, cs) = (comp_of[edge.range], comp_of[edge.source]);
        if cr == cs {
            for (i, &x) in labels[e].iter().enumerate() {
                if x > 0 {
                    own[cr] |= 1 << i;
                }
            }
        } else {
            succ[cr].push(cs);
        }
    }
    // Tarjan emits a component after everything reachable from it.
    let mut masks: Vec<Vec<u64>> = vec![Vec::new(); comps.len()];
    for c in 0..comps.len() {
        let mut cand = vec![own[c]];
        for &d in &succ[c] {
            cand.extend(masks[d].iter().map(|m| m | own[c]));
        }
        cand.sort_unstable();
        cand.dedup();
        let maximal: Vec<u64> =
            cand.iter().copied().filter(|&m| !cand.iter().any(|&o| o != m && o & m == m)).collect();
        masks[c] = maximal;
    }
    (comp_of, masks)
}

/// Upper density, "some element dominates" reading.
///
/// The T2 functor `(2,0), (0,1)` into ℕ² is upper dense under this reading
/// even though it is not ℕ²-primitive.
pub fn upper_dense(g: &KGraph, eta: &Functor, bounds: &SearchBounds) -> Result<Verdict> {
    check_inputs(g, eta)?;
    require_no_sources(g)?;
    let s = eta.semigroup();
    match s {
        Semigroup::Zk { .. } | Semigroup::FiniteGroup { .. } => Ok(Verdict::holds(
            Route::GroupOrder,
            Witness::Note { text: "in a group every element dominates every other; N = 0 suffices".into() },
        )),
        Semigroup::Nk { k: j } => {
            if eta.is_degree(g) {
                return Ok(Verdict::holds(
                    Route::DegreeIsUpperDense,
                    Witness::Note { text: "without sources b + d(wΛ^N) = b + N dominates a once N >= a".into() },
                ));
            }
            if !g.is_finite() {
                return upper_dense_search(g, eta, bounds, false);
            }
            let labels = eta.vector_labels().unwrap();
            let (comp_of, masks) = recurrent_masks(g, &labels);
            let full = if *j >= 64 { u64::MAX } else { (1u64 << j) - 1 };
            for w in 0..g.vertex_count() {
                if !masks[comp_of[w]].contains(&full) {
                    let bound = g.vertex_count() as i64 * max_abs_label(&labels);
                    let a = vec_elem(vec![bound + 1; *j]);
                    return Ok(Verdict::fails(
                        Route::RecurrentSupport,
                        Witness::Element {
                            element: s.format(&a),
                            detail: format!(
                                "no path into `{}` grows every coordinate; with b = 0 no label reaches a",
                                g.vertex_name(w)
                            ),
                        },
                    ));
                }
            }
            Ok(Verdict::holds(
                Route::RecurrentSupport,
                Witness::Note {
                    text: "from every vertex some chain of components has cycles growing every coordinate".into(),
                },
            ))
        }
        _ => upper_dense_search(g, eta, bounds, false),
    }
}

/// Upper density, "every element dominates" reading.
pub fn uniformly_upper_dense(g: &KGraph, eta: &Functor, bounds: &SearchBounds) -> Result<Verdict> {
    check_inputs(g, eta)?;
    require_no_sources(g)?;
    let s = eta.semigroup();
    match s {
        Semigroup::Zk { .. } | Semigroup::FiniteGroup { .. } => Ok(Verdict::holds(
            Route::GroupOrder,
            Witness::Note { text: "in a group every element dominates every other".into() },
        )),
        Semigroup::Nk { k: j } => {
            let labels = eta.vector_labels().unwrap();
            if let Some((i, z)) = zero_growth(g, &labels, *j) {
                return Ok(Verdict::fails(Route::ZeroGrowthSet, zero_growth_witness(g, s, *j, i, &z)));
            }
            if g.is_finite() {
                return Ok(Verdict::holds(
                    Route::ZeroGrowthSet,
                    Witness::Note {
                        text: "no vertex set carries diagonal paths that stop growing in some coordinate".into(),
                    },
                ));
            }
            upper_dense_search(g, eta, bounds, true)
        }
        _ => upper_dense_search(g, eta, bounds, true),
    }
}

/// Whether some cycle has label a positive multiple of `e_i`.
fn has_axis_cycle(g: &KGraph, labels: &[Vec<i64>], i: usize) -> bool {
    let on_axis = |e: usize| labels[e].iter().enumerate().all(|(c, &x)| c == i || x == 0);
    let mut adj = vec![Vec::new(); g.vertex_count()];
    for (e, edge) in g.skeleton().edges().iter().enumerate() {
        if on_axis(e) {
            adj[edge.range].push(edge.source);
        }
    }
    let comps = tarjan_scc(&adj);
    let mut comp_of = vec![0; g.vertex_count()];
    for (c, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = c;
        }
    }
    g.skeleton()
        .edges()
        .iter()
        .enumerate()
        .any(|(e, edge)| on_axis(e) && labels[e][i] > 0 && comp_of[edge.range] == comp_of[edge.source])
}

/// Smallest `m ≥ 1` such that every `s ∈ [m, B]ʲ` labels a path between
/// every pair, checked on the box `[0, B]ʲ`.
fn locate_cone(g: &KGraph, eta: &Functor, j: usize, labels: &[Vec<i64>]) -> Option<(u32, i64)> {
    let n = g.vertex_count();
    let b = (2 * n as i64 * max_abs_label(labels) + 4).min(box_limit(n, j, false));
    let lo = vec![0; j];
    let hi = vec![b; j];
    let keep = in_box(&lo, &hi);
    let vs: Vec<VertexId> = (0..n).collect();
    let reach = par::map(&vs, |&v| reach_labels(g, eta, v, &keep, None));
    let points = box_points(&lo, &hi);
    let mut t = 1i64;
    for r in &reach {
        let r = r.as_ref()?;
        for w in 0..n {
            for p in &points {
                if !r.contains(&(w, vec_elem(p.clone()))) {
                    t = t.max(p.iter().copied().min().unwrap_or(0) + 1);
                }
            }
        }
    }
    (t <= b / 2).then_some((t as u32, b))
}

/// S-primitivity of `η`.
pub fn s_primitive(g: &KGraph, eta: &Functor, bounds: &SearchBounds) -> Result<Verdict> {
    check_inputs(g, eta)?;
    let s = eta.semigroup();
    match s {
        Semigroup::AffineNN => Ok(Verdict::fails(
            Route::NoStrictlyPositive,
            Witness::Note {
                text: "powers of (m, n) have scale a power of n, so a prime not dividing n is never reached; \
                       no element is strictly positive"
                    .into(),
            },
        )),
        Semigroup::FiniteGroup { .. } => {
            if !g.is_finite() {
                return Ok(Verdict::unknown(
                    Route::GroupClosure,
                    bounds,
                    Witness::Note { text: "window graphs are not searched".into() },
                ));
            }
            let sp = skew_product(g, eta, &Window::All, true)?;
            let sg = sp.graph();
            let sc = strong_connectivity(sg);
            if sc.is_holds() || (sg.vertex_count() == 1) {
                Ok(Verdict::holds(
                    Route::GroupClosure,
                    Witness::Element {
                        element: s.format(&s.identity()),
                        detail: "every group element labels a path between every pair of vertices".into(),
                    },
                ))
            } else {
                Ok(Verdict { route: Route::GroupClosure, ..sc }.note("the finite skew product is not strongly connected"))
            }
        }
        Semigroup::Nk { k: j } | Semigroup::Zk { k: j } => {
            let j = *j;
            let nonneg = matches!(s, Semigroup::Nk { .. });
            if !g.is_finite() {
                return Ok(Verdict::unknown(
                    Route::LabelCone,
                    bounds,
                    Witness::Note { text: "window graphs are not searched".into() },
                ));
            }
            if nonneg && eta.is_degree(g) {
                let prim = is_primitive(g)?;
                return Ok(match prim.witness {
                    Witness::Degree { ref degree } if prim.is_holds() => Verdict::holds(
                        Route::PrimitivityCriterion,
                        Witness::Element {
                            element: s.format(&vec_elem(degree.coords().iter().map(|&c| c as i64).collect())),
                            detail: "M^n > 0 for every n >= t".into(),
                        },
                    ),
                    _ => Verdict { route: Route::PrimitivityCriterion, ..prim },
                });
            }
            let sc = strong_connectivity(g);
            if !sc.is_holds() {
                return Ok(sc.note("some pair of vertices is joined by no path"));
            }
            let labels = eta.vector_labels().unwrap();
            if !nonneg {
                for i in 0..j {
                    for sign in [1i64, -1] {
                        if labels.iter().all(|l| sign * l[i] >= 0) {
                            let mut missing = vec![0; j];
                            missing[i] = -sign;
                            return Ok(Verdict::fails(
                                Route::LabelCone,
                                Witness::Element {
                                    element: s.format(&vec_elem(missing)),
                                    detail: format!(
                                        "every edge label has coordinate {} of one sign, so no path carries this element",
                                        i + 1
                                    ),
                                },
                            ));
                        }
                    }
                }
            }
            let pot = Potentials::of_graph(g, &labels, j);
            if let Some(required) = pot.unreachable_label(0, 0) {
                let v = g.vertex_name(0).to_string();
                return Ok(Verdict::fails(
                    Route::ResidueLattice,
                    Witness::Residue {
                        lattice: pot.lattice.basis(),
                        v: v.clone(),
                        w: v,
                        a: String::new(),
                        b: String::new(),
                        required,
                        reason: "labels of paths between a pair lie in one coset of the lattice; every cone \
                                 s >= t meets the coset of `required`, which no path reaches"
                            .into(),
                    },
                ));
            }
            if nonneg {
                if let Some(i) = (0..j).find(|&i| !has_axis_cycle(g, &labels, i)) {
                    let mut e = vec![0; j];
                    e[i] = 1;
                    return Ok(Verdict::fails(
                        Route::LabelCone,
                        Witness::Element {
                            element: s.format(&vec_elem(e)),
                            detail: format!(
                                "no cycle label is a positive multiple of this unit vector, so t + n e_{} is missed for large n",
                                i + 1
                            ),
                        },
                    ));
                }
                let mut v = Verdict::holds(
                    Route::LabelCone,
                    Witness::Note {
                        text: "strongly connected, cycle labels generate the lattice and reach every axis".into(),
                    },
                );
                if let Some((t, b)) = locate_cone(g, eta, j, &labels) {
                    v.witness = Witness::Element {
                        element: s.format(&vec_elem(vec![i64::from(t); j])),
                        detail: format!("every s with t <= s <= {b} (coordinatewise) labels a path between every pair"),
                    };
                }
                return Ok(v);
            }
            // Z^j with labels of both signs: check a box of targets.
            let n = g.vertex_count();
            let b = (4 * max_abs_label(&labels) * n as i64 + bounds.sample_radius).min(box_limit(n, j, true));
            let (lo, hi) = (vec![-b; j], vec![b; j]);
            let keep = in_box(&lo, &hi);
            let vs: Vec<VertexId> = (0..n).collect();
            let reach = par::map(&vs, |&v| reach_labels(g, eta, v, &keep, None));
            let r = bounds.sample_radius;
            let targets = box_points(&vec![-r; j], &vec![r; j]);
            for (v, set) in reach.iter().enumerate() {
                let Some(set) = set else {
                    return Ok(Verdict::unknown(
                        Route::DirectSearch,
                        bounds,
                        Witness::Exhausted { explored: MAX_STATES as u64, reason: "label search too large".into() },
                    ));
                };
                for w in 0..n {
                    if let Some(p) = targets.iter().find(|p| !set.contains(&(w, vec_elem((*p).clone())))) {
                        return Ok(Verdict::unknown(
                            Route::DirectSearch,
                            bounds,
                            Witness::Exhausted {
                                explored: set.len() as u64,
                                reason: format!(
                                    "label {} not found on paths from `{}` to `{}`",
                                    s.format(&vec_elem(p.clone())),
                                    g.vertex_name(w),
                                    g.vertex_name(v)
                                ),
                            },
                        ));
                    }
                }
            }
            Ok(Verdict::holds(
                Route::DirectSearch,
                Witness::Element {
                    element: s.format(&s.identity()),
                    detail: format!("every label in [-{r}, {r}] found between every pair"),
                },
            )
            .up_to(bounds))
        }
        Semigroup::FreePlus { .. } => unreachable!("rejected by check_inputs"),
    }
}

fn residue_witness(g: &KGraph, s: &Semigroup, pot: &Potentials) -> Option<Witness> {
    let required = pot.unreachable_label(0, 0)?;
    let a = required.iter().map(|&x| (-x).max(0)).collect();
    let b = required.iter().map(|&x| x.max(0)).collect();
    let v = g.vertex_name(0).to_string();
    Some(Witness::Residue {
        lattice: pot.lattice.basis(),
        v: v.clone(),
        w: v,
        a: s.format(&vec_elem(a)),
        b: s.format(&vec_elem(b)),
        required,
        reason: "labels of paths from w to v lie in p(w) - p(v) + L, so a η(β) = b η(α) needs b - a in that coset; \
                 here it is not"
            .into(),
    })
}

/// Cofinality of the system `(Λ, S, η)`.
///
/// Routes, in order: S-primitive and uniformly upper dense (sufficient);
/// failure of uniform upper density (necessary condition); the degree
/// functor into `ℤᵏ` on a finite graph without sinks or sources, where the
/// answer is primitivity; `Γ(η) ≠ G` and lattice residues (necessary
/// conditions); the finite skew product for finite groups; and finally a
/// bounded search on the definition.
pub fn system_cofinal(g: &KGraph, eta: &Functor, bounds: &SearchBounds) -> Result<Verdict> {
    check_inputs(g, eta)?;
    require_no_sources(g)?;
    let s = eta.semigroup();

    let prim = s_primitive(g, eta, bounds)?;
    let ud = uniformly_upper_dense(g, eta, bounds)?;
    if prim.is_holds() && ud.is_holds() {
        let scope = if prim.is_exact() && ud.is_exact() { Scope::Exact } else { Scope::UpToBounds };
        let mut v = Verdict::holds(Route::PrimitiveAndUpperDense, prim.witness.clone());
        v.scope = scope;
        if scope == Scope::UpToBounds {
            v.bounds = Some(bounds.clone());
        }
        return Ok(v.note(format!("S-primitivity via {:?}; uniform upper density via {:?}", prim.route, ud.route)));
    }
    if ud.is_fails() {
        return Ok(ud.note("a cofinal system is uniformly upper dense"));
    }

    let vector_labels = eta.vector_labels();
    let pot = vector_labels.as_ref().filter(|_| g.is_finite()).map(|l| Potentials::of_graph(g, l, l.first().map_or(0, Vec::len).max(s.vector_dim().unwrap_or(0))));

    if matches!(s, Semigroup::Zk { .. }) && eta.is_degree(g) && g.is_finite() && !g.has_sinks() {
        let p = is_primitive(g)?;
        if p.is_holds() {
            return Ok(Verdict::holds(Route::PrimitivityCriterion, p.witness));
        }
        if let Some(w) = pot.as_ref().and_then(|pot| residue_witness(g, s, pot)) {
            return Ok(Verdict::fails(Route::ResidueLattice, w).note("agrees with the primitivity criterion: not primitive"));
        }
        return Ok(Verdict { route: Route::PrimitivityCriterion, ..p });
    }

    if s.is_group() && g.is_finite() {
        let gamma = gamma_eta(g, eta, bounds.max_pair_degree)?;
        if gamma.verdict.is_fails() {
            return Ok(gamma.verdict.note("a cofinal system over a group has Γ(η) = G"));
        }
    }
    if let Some(w) = pot.as_ref().and_then(|pot| residue_witness(g, s, pot)) {
        return Ok(Verdict::fails(Route::ResidueLattice, w));
    }

    if let Semigroup::FiniteGroup { .. } = s {
        if g.is_finite() {
            let sp = skew_product(g, eta, &Window::All, true)?;
            let c = is_cofinal(sp.graph(), bounds)?;
            if !c.is_unknown() {
                let v = Verdict { route: Route::FiniteSkewProduct, ..c };
                return Ok(v.note("the system is cofinal iff its skew product is"));
            }
        }
    }

    if !g.is_finite() {
        return Ok(Verdict::unknown(
            Route::DirectSearch,
            bounds,
            Witness::Note { text: "run the cofinality search on a skew-product window instead".into() },
        ));
    }
    system_search(g, eta, bounds)
}

/// Bounded search on the definition, along diagonal degrees (the set of
/// good `N` is upward closed).
pub fn system_search(g: &KGraph, eta: &Functor, bounds: &SearchBounds) -> Result<Verdict> {
    let s = eta.semigroup();
    let n = g.vertex_count();
    let cap = bounds.max_cofinal_degree;
    let samples = sample_pairs(s, bounds.sample_radius);
    let ws: Vec<VertexId> = (0..n).collect();
    let sets: Vec<Vec<LabelSet>> = par::map(&ws, |&w| diagonal_label_sets(g, eta, w, cap));

    let keep: Box<dyn Fn(&Element) -> bool + Sync> = match s {
        Semigroup::Nk { k } | Semigroup::Zk { k } => {
            let mut hi = vec![0i64; *k];
            for layer in sets.iter().flatten() {
                for (_, l) in layer {
                    for (h, &x) in hi.iter_mut().zip(l.as_vector().unwrap()) {
                        *h = (*h).max(x.abs());
                    }
                }
            }
            let r = bounds.sample_radius;
            let hi: Vec<i64> = hi.iter().map(|h| h + 2 * r).collect();
            let lo: Vec<i64> = if matches!(s, Semigroup::Nk { .. }) { vec![0; *k] } else { hi.iter().map(|h| -h).collect() };
            let states: f64 = hi.iter().zip(&lo).map(|(h, l)| (h - l + 1) as f64).product::<f64>() * n as f64;
            if states > MAX_STATES as f64 {
                return Ok(Verdict::unknown(
                    Route::DirectSearch,
                    bounds,
                    Witness::Exhausted { explored: 0, reason: "label box too large for the search".into() },
                ));
            }
            Box::new(move |x: &Element| {
                x.as_vector().is_some_and(|v| v.iter().zip(lo.iter().zip(&hi)).all(|(c, (a, b))| a <= c && c <= b))
            })
        }
        _ => Box::new(|_: &Element| true),
    };
    let max_len = match s {
        Semigroup::Nk { .. } | Semigroup::Zk { .. } => None,
        _ => Some(bounds.path_depth(n).min(2 * cap * g.rank() as u32 + 2)),
    };
    let vs: Vec<VertexId> = (0..n).collect();
    let reach = par::map(&vs, |&v| reach_labels(g, eta, v, keep.as_ref(), max_len));
    if reach.iter().any(Option::is_none) {
        return Ok(Verdict::unknown(
            Route::DirectSearch,
            bounds,
            Witness::Exhausted { explored: MAX_STATES as u64, reason: "label search too large".into() },
        ));
    }
    let mut instances = 0usize;
    let mut max_m = 0u32;
    for (v, rv) in reach.iter().enumerate() {
        let rv = rv.as_ref().unwrap();
        for (w, layers) in sets.iter().enumerate() {
            for (a, b) in &samples {
                let shift = s.multiply(&s.inverse(a)?, b)?;
                let good = layers.iter().position(|layer| {
                    layer.iter().all(|(x, l)| {
                        s.multiply(&shift, l).is_ok_and(|target| s.contains(&target) && rv.contains(&(*x, target)))
                    })
                });
                match good {
                    Some(m) => {
                        instances += 1;
                        max_m = max_m.max(m as u32);
                    }
                    None => {
                        return Ok(Verdict::unknown(
                            Route::DirectSearch,
                            bounds,
                            Witness::Exhausted {
                                explored: instances as u64,
                                reason: format!(
                                    "no N <= {cap} found for v = `{}`, w = `{}`, a = {}, b = {}",
                                    g.vertex_name(v),
                                    g.vertex_name(w),
                                    s.format(a),
                                    s.format(b)
                                ),
                            },
                        ))
                    }
                }
            }
        }
    }
    Ok(Verdict::holds(
        Route::DirectSearch,
        Witness::SystemPairs { instances, max_degree: Degree::diagonal(g.rank(), max_m) },
    )
    .up_to(bounds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn b2_eta() -> (KGraph, Functor) {
        let g = builtins::b2();
        let eta = Functor::from_names(
            &g,
            Semigroup::Nk { k: 1 },
            &[("e", vec_elem(vec![1])), ("f", vec_elem(vec![0]))],
        )
        .unwrap();
        (g, eta)
    }

    fn t2_eta(f1: [i64; 2], f2: [i64; 2]) -> (KGraph, Functor) {
        let g = builtins::t(2).unwrap();
        let eta = Functor::from_names(
            &g,
            Semigroup::Nk { k: 2 },
            &[("f1", vec_elem(f1.to_vec())), ("f2", vec_elem(f2.to_vec()))],
        )
        .unwrap();
        (g, eta)
    }

    #[test]
    fn b2_triple() {
        let (g, eta) = b2_eta();
        let b = SearchBounds::default();
        assert!(upper_dense(&g, &eta, &b).unwrap().is_holds());
        let sp = s_primitive(&g, &eta, &b).unwrap();
        assert!(sp.is_holds());
        assert!(matches!(&sp.witness, Witness::Element { element, .. } if element == "(1)"));
        let c = system_cofinal(&g, &eta, &b).unwrap();
        assert!(c.is_fails());
        assert!(matches!(&c.witness, Witness::ZeroGrowth { a, b, .. } if a == "(1)" && b == "(0)"));
        assert!(uniformly_upper_dense(&g, &eta, &b).unwrap().is_fails());
    }

    #[test]
    fn t2_parity_is_not_primitive() {
        let (g, eta) = t2_eta([2, 0], [0, 1]);
        let b = SearchBounds::default();
        let v = s_primitive(&g, &eta, &b).unwrap();
        assert!(v.is_fails());
        assert_eq!(v.route, Route::ResidueLattice);
        assert!(upper_dense(&g, &eta, &b).unwrap().is_holds());
    }

    #[test]
    fn t2_shear_is_cofinal() {
        let (g, eta) = t2_eta([1, 0], [1, 1]);
        let b = SearchBounds::default();
        assert!(s_primitive(&g, &eta, &b).unwrap().is_fails());
        assert!(system_cofinal(&g, &eta, &b).unwrap().is_holds());
    }

    #[test]
    fn three_vertex_degree_system_fails_by_parity() {
        let g = builtins::three_vertex();
        let eta = Functor::degree_into_zk(&g);
        let v = system_cofinal(&g, &eta, &SearchBounds::default()).unwrap();
        assert!(v.is_fails() && v.is_exact());
        match &v.witness {
            Witness::Residue { lattice, required, .. } => {
                assert_eq!(lattice, &vec![vec![2, 0], vec![0, 1]]);
                assert_eq!(required, &vec![1, 0]);
            }
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn zero_growth_on_b2() {
        let (g, eta) = b2_eta();
        let z = zero_growth_set(&g, &eta.vector_labels().unwrap(), 0);
        assert_eq!(z.count_ones(..), 1);
    }
}
