//! k-graphs given by a colored 1-skeleton and factorization squares.
//!
//! Morphisms are stored in normal form: the edge word (read range to source)
//! with all color-1 edges first, then color-2, and so on. The factorization
//! property is exactly the statement that this representative is unique, so
//! composition and factorization reduce to reordering words by adjacent
//! square swaps.

use std::collections::HashMap;
use std::fmt;
use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::degree::Degree;
use crate::error::{KGraphError, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Colors are packed into `u32` masks.
pub const MAX_RANK: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub name: String,
    /// 1-based color.
    pub color: usize,
    pub range: VertexId,
    pub source: VertexId,
}

/// The identity `f·g = g2·f2` between two-edge paths, with
/// `color(f) = color(f2) ≠ color(g) = color(g2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Square {
    pub f: EdgeId,
    pub g: EdgeId,
    pub g2: EdgeId,
    pub f2: EdgeId,
}

/// The colored 1-skeleton: vertices and edges with their range and source.
#[derive(Debug, Clone, Default)]
pub struct Skeleton {
    rank: usize,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
}

impl Skeleton {
    pub fn new(rank: usize) -> Result<Self> {
        if rank == 0 || rank > MAX_RANK {
            return Err(KGraphError::BadRank { got: rank, max: MAX_RANK });
        }
        Ok(Skeleton { rank, ..Default::default() })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<VertexId> {
        let name = name.into();
        if self.vertex_index.contains_key(&name) {
            return Err(KGraphError::DuplicateName { kind: "vertex", name });
        }
        let id = self.vertices.len();
        self.vertex_index.insert(name.clone(), id);
        self.vertices.push(name);
        Ok(id)
    }

    pub fn add_edge(
        &mut self,
        name: impl Into<String>,
        color: usize,
        range: &str,
        source: &str,
    ) -> Result<EdgeId> {
        let r = self.vertex_id(range)?;
        let s = self.vertex_id(source)?;
        self.add_edge_ids(name, color, r, s)
    }

    pub fn add_edge_ids(
        &mut self,
        name: impl Into<String>,
        color: usize,
        range: VertexId,
        source: VertexId,
    ) -> Result<EdgeId> {
        let name = name.into();
        if color == 0 || color > self.rank {
            return Err(KGraphError::BadColor { color, rank: self.rank });
        }
        if range >= self.vertices.len() || source >= self.vertices.len() {
            return Err(KGraphError::UnknownVertex(format!("#{}", range.max(source))));
        }
        if self.edge_index.contains_key(&name) {
            return Err(KGraphError::DuplicateName { kind: "edge", name });
        }
        let id = self.edges.len();
        self.edge_index.insert(name.clone(), id);
        self.edges.push(Edge { name, color, range, source });
        Ok(id)
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| KGraphError::UnknownVertex(name.to_string()))
    }

    pub fn edge_id(&self, name: &str) -> Result<EdgeId> {
        self.edge_index
            .get(name)
            .copied()
            .ok_or_else(|| KGraphError::UnknownEdge(name.to_string()))
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Build a square from edge names.
    pub fn square(&self, f: &str, g: &str, g2: &str, f2: &str) -> Result<Square> {
        Ok(Square {
            f: self.edge_id(f)?,
            g: self.edge_id(g)?,
            g2: self.edge_id(g2)?,
            f2: self.edge_id(f2)?,
        })
    }
}

/// Clipping information for a finite window of an infinite k-graph.
///
/// Bit `i-1` of `range_clipped[v]` is set when some color-`i` edges with
/// range `v` lie outside the window, so `vΛ^{e_i}` is only partially
/// visible; `source_clipped` is the same for edges with source `v`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Boundary {
    pub range_clipped: Vec<u32>,
    pub source_clipped: Vec<u32>,
}

impl Boundary {
    pub fn new(vertex_count: usize) -> Self {
        Boundary {
            range_clipped: vec![0; vertex_count],
            source_clipped: vec![0; vertex_count],
        }
    }

    pub fn is_clipped(&self, v: VertexId) -> bool {
        self.range_clipped[v] != 0 || self.source_clipped[v] != 0
    }

    pub fn range_clipped_in(&self, v: VertexId, color: usize) -> bool {
        self.range_clipped[v] & (1 << (color - 1)) != 0
    }

    pub fn source_clipped_in(&self, v: VertexId, color: usize) -> bool {
        self.source_clipped[v] & (1 << (color - 1)) != 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnmatchedPath {
    pub first: String,
    pub second: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareConflict {
    pub path: [String; 2],
    pub images: [[String; 2]; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HexagonViolation {
    pub path: [String; 3],
    pub left_route: [String; 3],
    pub right_route: [String; 3],
}

/// Outcome of checking a rule set for completeness and associativity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Two-color paths that no square identifies with anything.
    pub unmatched: Vec<UnmatchedPath>,
    /// Indices of squares that repeat an earlier square.
    pub duplicates: Vec<usize>,
    /// Two-color paths identified with two different paths.
    pub conflicts: Vec<SquareConflict>,
    pub hexagon_violations: Vec<HexagonViolation>,
    /// Unmatched paths excused because the partner leaves the window.
    pub clipped_unmatched: usize,
    pub squares_checked: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.unmatched.is_empty()
            && self.duplicates.is_empty()
            && self.conflicts.is_empty()
            && self.hexagon_violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid ({} squares)", self.squares_checked);
        }
        let mut parts = Vec::new();
        if !self.unmatched.is_empty() {
            let list: Vec<_> = self
                .unmatched
                .iter()
                .map(|u| format!("{}{}", u.first, u.second))
                .collect();
            parts.push(format!("missing squares for {}", list.join(", ")));
        }
        if !self.duplicates.is_empty() {
            parts.push(format!("duplicate squares {:?}", self.duplicates));
        }
        for c in &self.conflicts {
            parts.push(format!(
                "{}{} is identified with both {}{} and {}{}",
                c.path[0], c.path[1], c.images[0][0], c.images[0][1], c.images[1][0], c.images[1][1]
            ));
        }
        for h in &self.hexagon_violations {
            parts.push(format!(
                "associativity fails on {}{}{}: {} vs {}",
                h.path[0],
                h.path[1],
                h.path[2],
                h.left_route.join(""),
                h.right_route.join("")
            ));
        }
        write!(f, "{}", parts.join("; "))
    }
}

/// A morphism of a [`KGraph`] in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    range: VertexId,
    source: VertexId,
    edges: Vec<EdgeId>,
    degree: Degree,
}

impl Path {
    pub fn range(&self) -> VertexId {
        self.range
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    /// Normal-form edge word, range to source.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn degree(&self) -> &Degree {
        &self.degree
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }
}

/// A path rendered with names, for reports and witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathRepr {
    pub range: String,
    pub source: String,
    pub edges: Vec<String>,
    pub degree: Degree,
}

impl fmt::Display for PathRepr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.edges.is_empty() {
            write!(f, "{}", self.range)
        } else {
            write!(f, "{}", self.edges.join("·"))
        }
    }
}

/// A validated k-graph, possibly a finite window of an infinite one.
#[derive(Debug, Clone)]
pub struct KGraph {
    name: String,
    skeleton: Skeleton,
    squares: Vec<Square>,
    swap: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
    by_range: Vec<Vec<Vec<EdgeId>>>,
    by_source: Vec<Vec<Vec<EdgeId>>>,
    boundary: Option<Boundary>,
}

impl KGraph {
    /// Validate the rules and build a finite k-graph.
    pub fn new(name: impl Into<String>, skeleton: Skeleton, squares: Vec<Square>) -> Result<Self> {
        Self::build(name.into(), skeleton, squares, None)
    }

    /// Build a window of an infinite k-graph. Completeness failures are
    /// excused only where the boundary records a clipped edge that the
    /// missing partner path would have used.
    pub fn windowed(
        name: impl Into<String>,
        skeleton: Skeleton,
        squares: Vec<Square>,
        boundary: Boundary,
    ) -> Result<Self> {
        if boundary.range_clipped.len() != skeleton.vertices.len()
            || boundary.source_clipped.len() != skeleton.vertices.len()
        {
            return Err(KGraphError::Precondition(
                "boundary does not match vertex count".into(),
            ));
        }
        Self::build(name.into(), skeleton, squares, Some(boundary))
    }

    fn build(
        name: String,
        skeleton: Skeleton,
        squares: Vec<Square>,
        boundary: Option<Boundary>,
    ) -> Result<Self> {
        let (by_range, by_source) = adjacency(&skeleton);
        let (report, swap) = check_rules(&skeleton, &squares, &by_range, boundary.as_ref())?;
        if !report.is_valid() {
            return Err(KGraphError::InvalidRules(Box::new(report)));
        }
        Ok(KGraph { name, skeleton, squares, swap, by_range, by_source, boundary })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.skeleton.rank
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    pub fn vertex_count(&self) -> usize {
        self.skeleton.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.skeleton.edges.len()
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.skeleton.edges[e]
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.skeleton.vertices[v]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.skeleton.edges[e].name
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId> {
        self.skeleton.vertex_id(name)
    }

    pub fn edge_id(&self, name: &str) -> Result<EdgeId> {
        self.skeleton.edge_id(name)
    }

    pub fn boundary(&self) -> Option<&Boundary> {
        self.boundary.as_ref()
    }

    pub fn is_finite(&self) -> bool {
        self.boundary.is_none()
    }

    /// Edges of the given color with range `v` (the set `vΛ^{e_i}`).
    pub fn range_edges(&self, v: VertexId, color: usize) -> &[EdgeId] {
        &self.by_range[v][color - 1]
    }

    /// Edges of the given color with source `v` (the set `Λ^{e_i}v`).
    pub fn source_edges(&self, v: VertexId, color: usize) -> &[EdgeId] {
        &self.by_source[v][color - 1]
    }

    /// True when `v` lies on the window boundary.
    pub fn is_clipped(&self, v: VertexId) -> bool {
        self.boundary.as_ref().is_some_and(|b| b.is_clipped(v))
    }

    /// First `(v, color)` with `vΛ^{e_i} = ∅`, skipping clipped boundary
    /// colors of window graphs.
    pub fn source_witness(&self) -> Option<(VertexId, usize)> {
        (0..self.vertex_count()).find_map(|v| {
            (1..=self.rank()).find_map(|c| {
                let clipped = self.boundary.as_ref().is_some_and(|b| b.range_clipped_in(v, c));
                (!clipped && self.by_range[v][c - 1].is_empty()).then_some((v, c))
            })
        })
    }

    /// First `(v, color)` with `Λ^{e_i}v = ∅`.
    pub fn sink_witness(&self) -> Option<(VertexId, usize)> {
        (0..self.vertex_count()).find_map(|v| {
            (1..=self.rank()).find_map(|c| {
                let clipped = self.boundary.as_ref().is_some_and(|b| b.source_clipped_in(v, c));
                (!clipped && self.by_source[v][c - 1].is_empty()).then_some((v, c))
            })
        })
    }

    pub fn has_sources(&self) -> bool {
        self.source_witness().is_some()
    }

    pub fn has_sinks(&self) -> bool {
        self.sink_witness().is_some()
    }

    fn check_degree(&self, n: &Degree) -> Result<()> {
        if n.rank() != self.rank() {
            return Err(KGraphError::RankMismatch { got: n.rank(), rank: self.rank() });
        }
        Ok(())
    }

    fn window_exceeded(&self, v: VertexId, color: usize) -> KGraphError {
        KGraphError::WindowExceeded { vertex: self.vertex_name(v).to_string(), color }
    }

    fn ensure_range_complete(&self, v: VertexId, color: usize) -> Result<()> {
        match &self.boundary {
            Some(b) if b.range_clipped_in(v, color) => Err(self.window_exceeded(v, color)),
            _ => Ok(()),
        }
    }

    fn ensure_source_complete(&self, v: VertexId, color: usize) -> Result<()> {
        match &self.boundary {
            Some(b) if b.source_clipped_in(v, color) => Err(self.window_exceeded(v, color)),
            _ => Ok(()),
        }
    }

    /// The identity morphism at `v`.
    pub fn vertex_path(&self, v: VertexId) -> Path {
        Path { range: v, source: v, edges: Vec::new(), degree: Degree::zero(self.rank()) }
    }

    pub fn edge_path(&self, e: EdgeId) -> Path {
        let edge = self.edge(e);
        Path {
            range: edge.range,
            source: edge.source,
            edges: vec![e],
            degree: Degree::unit(self.rank(), edge.color),
        }
    }

    /// The morphism represented by an arbitrary composable edge word.
    pub fn path_from_word(&self, word: &[EdgeId]) -> Result<Path> {
        let Some(&first) = word.first() else {
            return Err(KGraphError::Precondition("empty word has no range".into()));
        };
        for w in word.windows(2) {
            let (a, b) = (self.edge(w[0]), self.edge(w[1]));
            if a.source != b.range {
                return Err(KGraphError::NotComposable {
                    source_vertex: self.vertex_name(a.source).to_string(),
                    range_vertex: self.vertex_name(b.range).to_string(),
                });
            }
        }
        let mut degree = Degree::zero(self.rank());
        for &e in word {
            degree = degree.plus_unit(self.edge(e).color);
        }
        let edges = self.normalize(word)?;
        Ok(Path {
            range: self.edge(first).range,
            source: self.edge(*word.last().unwrap()).source,
            edges,
            degree,
        })
    }

    pub fn path_from_names(&self, names: &[&str]) -> Result<Path> {
        let word = names.iter().map(|n| self.edge_id(n)).collect::<Result<Vec<_>>>()?;
        self.path_from_word(&word)
    }

    /// Apply a square to the composable pair `a·b` with distinct colors.
    pub fn swap_pair(&self, a: EdgeId, b: EdgeId) -> Result<(EdgeId, EdgeId)> {
        if let Some(&img) = self.swap.get(&(a, b)) {
            return Ok(img);
        }
        // Only a window can lose a partner path; blame the vertex whose
        // clipped edges would have carried it.
        let (ea, eb) = (self.edge(a), self.edge(b));
        Err(self.window_exceeded(ea.range, eb.color))
    }

    /// Rearrange a word so its color sequence equals `target` (which must be
    /// a permutation of the word's colors), using adjacent square swaps.
    pub fn reorder(&self, word: &[EdgeId], target: &[usize]) -> Result<Vec<EdgeId>> {
        debug_assert_eq!(word.len(), target.len());
        // The j-th color-c edge of the word moves to the j-th slot of color c
        // in the target; same-color edges never pass each other.
        let mut slots: Vec<Vec<usize>> = vec![Vec::new(); self.rank() + 1];
        for (pos, &c) in target.iter().enumerate().rev() {
            slots[c].push(pos);
        }
        let mut keyed = Vec::with_capacity(word.len());
        for &e in word {
            let c = self.edge(e).color;
            let slot = slots[c].pop().ok_or_else(|| {
                KGraphError::Precondition("target colors do not match word".into())
            })?;
            keyed.push((slot, e));
        }
        let n = keyed.len();
        for pass in 0..n {
            let mut swapped = false;
            for p in 0..n - 1 - pass {
                if keyed[p].0 > keyed[p + 1].0 {
                    let (x, y) = self.swap_pair(keyed[p].1, keyed[p + 1].1)?;
                    let (kx, ky) = (keyed[p + 1].0, keyed[p].0);
                    keyed[p] = (kx, x);
                    keyed[p + 1] = (ky, y);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        Ok(keyed.into_iter().map(|(_, e)| e).collect())
    }

    /// Color-sort a composable word.
    pub fn normalize(&self, word: &[EdgeId]) -> Result<Vec<EdgeId>> {
        let mut target: Vec<usize> = word.iter().map(|&e| self.edge(e).color).collect();
        target.sort_unstable();
        self.reorder(word, &target)
    }

    pub fn compose(&self, lambda: &Path, mu: &Path) -> Result<Path> {
        if lambda.source != mu.range {
            return Err(KGraphError::NotComposable {
                source_vertex: self.vertex_name(lambda.source).to_string(),
                range_vertex: self.vertex_name(mu.range).to_string(),
            });
        }
        if lambda.is_vertex() {
            return Ok(mu.clone());
        }
        if mu.is_vertex() {
            return Ok(lambda.clone());
        }
        let word: Vec<EdgeId> = lambda.edges.iter().chain(&mu.edges).copied().collect();
        Ok(Path {
            range: lambda.range,
            source: mu.source,
            edges: self.normalize(&word)?,
            degree: &lambda.degree + &mu.degree,
        })
    }

    /// `λ(m, n)`: the middle factor of degree `n - m`.
    pub fn segment(&self, lambda: &Path, m: &Degree, n: &Degree) -> Result<Path> {
        self.check_degree(m)?;
        self.check_degree(n)?;
        let d = &lambda.degree;
        let out_of_range = || KGraphError::DegreeOutOfRange {
            lo: m.coords().to_vec(),
            hi: n.coords().to_vec(),
            degree: d.coords().to_vec(),
        };
        if !m.leq(n) || !n.leq(d) {
            return Err(out_of_range());
        }
        let mid = n.checked_sub(m).ok_or_else(out_of_range)?;
        let tail = d.checked_sub(n).ok_or_else(out_of_range)?;
        let mut target = m.color_word();
        target.extend(mid.color_word());
        target.extend(tail.color_word());
        let word = self.reorder(&lambda.edges, &target)?;
        let (lo, hi) = (m.total() as usize, n.total() as usize);
        let range = if lo == 0 { lambda.range } else { self.edge(word[lo - 1]).source };
        let source = if hi == 0 { lambda.range } else { self.edge(word[hi - 1]).source };
        Ok(Path { range, source, edges: word[lo..hi].to_vec(), degree: mid })
    }

    /// The unique `(μ, ν)` with `λ = μν` and `d(μ) = m`.
    pub fn factor(&self, lambda: &Path, m: &Degree) -> Result<(Path, Path)> {
        let zero = Degree::zero(self.rank());
        Ok((self.segment(lambda, &zero, m)?, self.segment(lambda, m, &lambda.degree)?))
    }

    /// Visit every word of `vΛⁿ` in normal form, depth first and color by
    /// color. The callback sees the word and its source.
    pub fn for_each_path_from<F>(&self, v: VertexId, n: &Degree, mut f: F) -> Result<ControlFlow<()>>
    where
        F: FnMut(&[EdgeId], VertexId) -> ControlFlow<()>,
    {
        self.check_degree(n)?;
        let colors = n.color_word();
        let mut word = Vec::with_capacity(colors.len());
        self.extend_from(v, &colors, &mut word, &mut f)
    }

    fn extend_from<F>(
        &self,
        x: VertexId,
        colors: &[usize],
        word: &mut Vec<EdgeId>,
        f: &mut F,
    ) -> Result<ControlFlow<()>>
    where
        F: FnMut(&[EdgeId], VertexId) -> ControlFlow<()>,
    {
        let Some(&c) = colors.get(word.len()) else {
            return Ok(f(word, x));
        };
        self.ensure_range_complete(x, c)?;
        for &e in &self.by_range[x][c - 1] {
            word.push(e);
            let flow = self.extend_from(self.edge(e).source, colors, word, f)?;
            word.pop();
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    /// `vΛⁿ`.
    pub fn paths_from(&self, v: VertexId, n: &Degree) -> Result<Vec<Path>> {
        let mut out = Vec::new();
        let _ = self.for_each_path_from(v, n, |word, s| {
            out.push(Path { range: v, source: s, edges: word.to_vec(), degree: n.clone() });
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }

    /// `Λⁿv`, built from the source end.
    pub fn paths_into(&self, v: VertexId, n: &Degree) -> Result<Vec<Path>> {
        self.check_degree(n)?;
        let mut colors = n.color_word();
        colors.reverse();
        let mut out = Vec::new();
        let mut word = Vec::with_capacity(colors.len());
        self.extend_into(v, v, n, &colors, &mut word, &mut out)?;
        Ok(out)
    }

    fn extend_into(
        &self,
        end: VertexId,
        x: VertexId,
        n: &Degree,
        colors: &[usize],
        word: &mut Vec<EdgeId>,
        out: &mut Vec<Path>,
    ) -> Result<()> {
        let Some(&c) = colors.get(word.len()) else {
            let mut edges = word.clone();
            edges.reverse();
            out.push(Path { range: x, source: end, edges, degree: n.clone() });
            return Ok(());
        };
        self.ensure_source_complete(x, c)?;
        for &e in &self.by_source[x][c - 1] {
            word.push(e);
            self.extend_into(end, self.edge(e).range, n, colors, word, out)?;
            word.pop();
        }
        Ok(())
    }

    /// `uΛⁿv`.
    pub fn paths_between(&self, u: VertexId, n: &Degree, v: VertexId) -> Result<Vec<Path>> {
        Ok(self.paths_from(u, n)?.into_iter().filter(|p| p.source == v).collect())
    }

    pub fn count_paths_from(&self, v: VertexId, n: &Degree) -> Result<u64> {
        let mut count = 0u64;
        let _ = self.for_each_path_from(v, n, |_, _| {
            count += 1;
            ControlFlow::Continue(())
        })?;
        Ok(count)
    }

    pub fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.vertex_count())
    }

    /// `{ s(e) : e ∈ xΛ^{e_i}, x ∈ set }`.
    pub fn step_sources(&self, set: &FixedBitSet, color: usize) -> Result<FixedBitSet> {
        let mut next = self.empty_set();
        for x in set.ones() {
            self.ensure_range_complete(x, color)?;
            for &e in &self.by_range[x][color - 1] {
                next.insert(self.edge(e).source);
            }
        }
        Ok(next)
    }

    /// `{ r(e) : e ∈ Λ^{e_i}x, x ∈ set }`.
    pub fn step_ranges(&self, set: &FixedBitSet, color: usize) -> Result<FixedBitSet> {
        let mut next = self.empty_set();
        for x in set.ones() {
            self.ensure_source_complete(x, color)?;
            for &e in &self.by_source[x][color - 1] {
                next.insert(self.edge(e).range);
            }
        }
        Ok(next)
    }

    /// `{ s(λ) : λ ∈ vΛⁿ }`, without enumerating paths.
    pub fn sources_of_degree(&self, v: VertexId, n: &Degree) -> Result<FixedBitSet> {
        self.check_degree(n)?;
        let mut set = self.empty_set();
        set.insert(v);
        self.advance_sources(set, n)
    }

    /// `{ s(λ) : λ ∈ xΛⁿ, x ∈ set }`.
    pub fn advance_sources(&self, mut set: FixedBitSet, n: &Degree) -> Result<FixedBitSet> {
        for color in 1..=self.rank() {
            for _ in 0..n.get(color) {
                set = self.step_sources(&set, color)?;
            }
        }
        Ok(set)
    }

    /// `{ r(λ) : λ ∈ Λⁿv }`.
    pub fn ranges_of_degree(&self, v: VertexId, n: &Degree) -> Result<FixedBitSet> {
        self.check_degree(n)?;
        let mut set = self.empty_set();
        set.insert(v);
        for color in 1..=self.rank() {
            for _ in 0..n.get(color) {
                set = self.step_ranges(&set, color)?;
            }
        }
        Ok(set)
    }

    /// Every `x` with `vΛx ≠ ∅` inside the graph (degree zero included).
    /// For a window this under-approximates the true set.
    pub fn reachable_from(&self, v: VertexId) -> FixedBitSet {
        let mut seen = self.empty_set();
        let mut stack = vec![v];
        seen.insert(v);
        while let Some(x) = stack.pop() {
            for colored in &self.by_range[x] {
                for &e in colored {
                    let s = self.edge(e).source;
                    if !seen.put(s) {
                        stack.push(s);
                    }
                }
            }
        }
        seen
    }

    pub fn path_repr(&self, p: &Path) -> PathRepr {
        PathRepr {
            range: self.vertex_name(p.range).to_string(),
            source: self.vertex_name(p.source).to_string(),
            edges: p.edges.iter().map(|&e| self.edge_name(e).to_string()).collect(),
            degree: p.degree.clone(),
        }
    }

    pub fn set_names(&self, set: &FixedBitSet) -> Vec<String> {
        set.ones().map(|v| self.vertex_name(v).to_string()).collect()
    }
}

type Adjacency = Vec<Vec<Vec<EdgeId>>>;

fn adjacency(sk: &Skeleton) -> (Adjacency, Adjacency) {
    let n = sk.vertices.len();
    let mut by_range = vec![vec![Vec::new(); sk.rank]; n];
    let mut by_source = vec![vec![Vec::new(); sk.rank]; n];
    for (id, e) in sk.edges.iter().enumerate() {
        by_range[e.range][e.color - 1].push(id);
        by_source[e.source][e.color - 1].push(id);
    }
    (by_range, by_source)
}

/// Check a rule set against a skeleton without building a graph.
pub fn validate(skeleton: &Skeleton, squares: &[Square]) -> Result<ValidationReport> {
    let (by_range, _) = adjacency(skeleton);
    check_rules(skeleton, squares, &by_range, None).map(|(r, _)| r)
}

type SwapMap = HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>;

fn check_rules(
    sk: &Skeleton,
    squares: &[Square],
    by_range: &Adjacency,
    boundary: Option<&Boundary>,
) -> Result<(ValidationReport, SwapMap)> {
    let name = |e: EdgeId| sk.edges[e].name.clone();
    let mut report = ValidationReport { squares_checked: squares.len(), ..Default::default() };
    let mut swap: SwapMap = HashMap::with_capacity(2 * squares.len());

    for (index, sq) in squares.iter().enumerate() {
        for e in [sq.f, sq.g, sq.g2, sq.f2] {
            if e >= sk.edges.len() {
                return Err(KGraphError::UnknownEdge(format!("#{e}")));
            }
        }
        let (f, g, g2, f2) = (&sk.edges[sq.f], &sk.edges[sq.g], &sk.edges[sq.g2], &sk.edges[sq.f2]);
        let rule = format!("{}{} = {}{}", f.name, g.name, g2.name, f2.name);
        let malformed = |reason: &str| KGraphError::MalformedSquare {
            index,
            rule: rule.clone(),
            reason: reason.to_string(),
        };
        if f.color == g.color {
            return Err(malformed("both edges of the left side have the same color"));
        }
        if f2.color != f.color || g2.color != g.color {
            return Err(malformed("right side must use the colors of the left side in swapped order"));
        }
        if f.source != g.range {
            return Err(malformed("left side is not composable"));
        }
        if g2.source != f2.range {
            return Err(malformed("right side is not composable"));
        }
        if f.range != g2.range {
            return Err(malformed("ranges of the two sides differ"));
        }
        if g.source != f2.source {
            return Err(malformed("sources of the two sides differ"));
        }

        let mut duplicate = false;
        for (key, img) in [((sq.f, sq.g), (sq.g2, sq.f2)), ((sq.g2, sq.f2), (sq.f, sq.g))] {
            match swap.get(&key) {
                None => {
                    swap.insert(key, img);
                }
                Some(&prev) if prev == img => duplicate = true,
                Some(&prev) => {
                    let conflict = SquareConflict {
                        path: [name(key.0), name(key.1)],
                        images: [[name(prev.0), name(prev.1)], [name(img.0), name(img.1)]],
                    };
                    if !report.conflicts.contains(&conflict) {
                        report.conflicts.push(conflict);
                    }
                }
            }
        }
        if duplicate {
            report.duplicates.push(index);
        }
    }

    // Completeness: every two-color composable pair has a partner.
    for (a, ea) in sk.edges.iter().enumerate() {
        for color in 1..=sk.rank {
            if color == ea.color {
                continue;
            }
            for &b in &by_range[ea.source][color - 1] {
                if swap.contains_key(&(a, b)) {
                    continue;
                }
                let eb = &sk.edges[b];
                let excused = boundary.is_some_and(|bd| {
                    bd.range_clipped_in(ea.range, eb.color) || bd.source_clipped_in(eb.source, ea.color)
                });
                if excused {
                    report.clipped_unmatched += 1;
                } else {
                    report.unmatched.push(UnmatchedPath { first: name(a), second: name(b) });
                }
            }
        }
    }

    // Associativity for three colors i < j < l: both ways of reversing the
    // color order must agree.
    if sk.rank >= 3 {
        for (a, ea) in sk.edges.iter().enumerate() {
            for cj in ea.color + 1..=sk.rank {
                for &b in &by_range[ea.source][cj - 1] {
                    for cl in cj + 1..=sk.rank {
                        for &c in &by_range[sk.edges[b].source][cl - 1] {
                            let left = (|| {
                                let (c1, b1) = *swap.get(&(b, c))?;
                                let (c2, a1) = *swap.get(&(a, c1))?;
                                let (b2, a2) = *swap.get(&(a1, b1))?;
                                Some([c2, b2, a2])
                            })();
                            let right = (|| {
                                let (b1, a1) = *swap.get(&(a, b))?;
                                let (c1, a2) = *swap.get(&(a1, c))?;
                                let (c2, b2) = *swap.get(&(b1, c1))?;
                                Some([c2, b2, a2])
                            })();
                            if let (Some(l), Some(r)) = (left, right) {
                                if l != r {
                                    report.hexagon_violations.push(HexagonViolation {
                                        path: [name(a), name(b), name(c)],
                                        left_route: l.map(name),
                                        right_route: r.map(name),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    Ok((report, swap))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_loops(with_square: bool) -> (Skeleton, Vec<Square>) {
        let mut sk = Skeleton::new(2).unwrap();
        sk.add_vertex("v").unwrap();
        sk.add_edge("f", 1, "v", "v").unwrap();
        sk.add_edge("g", 2, "v", "v").unwrap();
        let squares = if with_square { vec![sk.square("f", "g", "g", "f").unwrap()] } else { vec![] };
        (sk, squares)
    }

    #[test]
    fn single_square_is_valid() {
        let (sk, sq) = two_loops(true);
        let report = validate(&sk, &sq).unwrap();
        assert!(report.is_valid(), "{report}");
    }

    #[test]
    fn missing_square_is_reported() {
        let (sk, sq) = two_loops(false);
        let report = validate(&sk, &sq).unwrap();
        assert!(!report.is_valid());
        assert_eq!(report.unmatched.len(), 2);
        assert!(matches!(KGraph::new("x", sk, sq), Err(KGraphError::InvalidRules(_))));
    }

    #[test]
    fn duplicate_square_is_reported() {
        let (sk, mut sq) = two_loops(true);
        sq.push(sq[0]);
        let report = validate(&sk, &sq).unwrap();
        assert_eq!(report.duplicates, vec![1]);
    }

    #[test]
    fn malformed_square_names_rule() {
        let mut sk = Skeleton::new(2).unwrap();
        sk.add_vertex("u").unwrap();
        sk.add_vertex("v").unwrap();
        sk.add_edge("f", 1, "u", "v").unwrap();
        sk.add_edge("g", 2, "v", "v").unwrap();
        sk.add_edge("h", 2, "u", "u").unwrap();
        let sq = vec![sk.square("f", "g", "g", "f").unwrap()];
        match validate(&sk, &sq) {
            Err(KGraphError::MalformedSquare { index, rule, .. }) => {
                assert_eq!(index, 0);
                assert_eq!(rule, "fg = gf");
            }
            other => panic!("expected malformed square, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_names_rejected() {
        let mut sk = Skeleton::new(1).unwrap();
        sk.add_vertex("v").unwrap();
        assert!(matches!(sk.add_vertex("v"), Err(KGraphError::DuplicateName { .. })));
        sk.add_edge("e", 1, "v", "v").unwrap();
        assert!(matches!(sk.add_edge("e", 1, "v", "v"), Err(KGraphError::DuplicateName { .. })));
        assert!(matches!(sk.add_edge("x", 2, "v", "v"), Err(KGraphError::BadColor { .. })));
    }

    #[test]
    fn compose_rejects_non_composable() {
        let mut sk = Skeleton::new(1).unwrap();
        sk.add_vertex("u").unwrap();
        sk.add_vertex("v").unwrap();
        sk.add_edge("e", 1, "u", "v").unwrap();
        let g = KGraph::new("x", sk, vec![]).unwrap();
        let e = g.edge_path(0);
        assert!(matches!(g.compose(&e, &e), Err(KGraphError::NotComposable { .. })));
        let v = g.vertex_path(1);
        assert_eq!(g.compose(&e, &v).unwrap(), e);
    }
}
