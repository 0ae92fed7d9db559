//! Lattice potentials for vector-valued labels.
//!
//! Choose a spanning forest of the undirected skeleton and give every
//! vertex a potential `p` so that `p(s(e)) = p(r(e)) + η(e)` on tree edges.
//! Every edge then has a discrepancy `δ(e) = p(r(e)) + η(e) - p(s(e))`, and
//! the label of any path from `w` to `v` lies in `p(w) - p(v) + Z`, where
//! `Z` is the lattice spanned by the discrepancies.

use crate::graph::{EdgeId, KGraph, VertexId};
use crate::lattice::Lattice;

#[derive(Debug, Clone)]
pub struct Potentials {
    /// Potential per vertex; `None` for vertices outside the chosen edges.
    pub potential: Vec<Option<Vec<i64>>>,
    /// Component index per vertex (undirected, restricted to the edges).
    pub component: Vec<Option<usize>>,
    pub lattice: Lattice,
}

impl Potentials {
    /// Potentials over every edge of the graph.
    pub fn of_graph(g: &KGraph, labels: &[Vec<i64>], dim: usize) -> Self {
        Self::restricted(g, labels, dim, |_| true)
    }

    /// Potentials over the edges selected by `keep`. Vertices touched by no
    /// kept edge still receive a potential (zero) of their own component.
    pub fn restricted(g: &KGraph, labels: &[Vec<i64>], dim: usize, keep: impl Fn(EdgeId) -> bool) -> Self {
        let n = g.vertex_count();
        let mut incident: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
        for e in (0..g.edge_count()).filter(|&e| keep(e)) {
            let edge = g.edge(e);
            incident[edge.range].push(e);
            if edge.source != edge.range {
                incident[edge.source].push(e);
            }
        }
        let mut potential: Vec<Option<Vec<i64>>> = vec![None; n];
        let mut component = vec![None; n];
        let mut comp = 0;
        for root in 0..n {
            if potential[root].is_some() {
                continue;
            }
            potential[root] = Some(vec![0; dim]);
            component[root] = Some(comp);
            let mut stack = vec![root];
            while let Some(x) = stack.pop() {
                let px = potential[x].clone().unwrap();
                for &e in &incident[x] {
                    let edge = g.edge(e);
                    let (other, p) = if edge.range == x {
                        (edge.source, add(&px, &labels[e]))
                    } else {
                        (edge.range, sub(&px, &labels[e]))
                    };
                    if potential[other].is_none() {
                        potential[other] = Some(p);
                        component[other] = Some(comp);
                        stack.push(other);
                    }
                }
            }
            comp += 1;
        }
        let mut lattice = Lattice::zero(dim);
        for e in (0..g.edge_count()).filter(|&e| keep(e)) {
            let edge = g.edge(e);
            let (pr, ps) = (potential[edge.range].as_ref().unwrap(), potential[edge.source].as_ref().unwrap());
            let delta = sub(&add(pr, &labels[e]), ps);
            if delta.iter().any(|&x| x != 0) {
                lattice.add(&delta);
            }
        }
        Potentials { potential, component, lattice }
    }

    /// The coset representative `p(w) - p(v)` of labels of paths from `w`
    /// to `v`, when both lie in one component.
    pub fn offset(&self, v: VertexId, w: VertexId) -> Option<Vec<i64>> {
        if self.component[v] != self.component[w] {
            return None;
        }
        Some(sub(self.potential[w].as_ref()?, self.potential[v].as_ref()?))
    }

    /// An element that no path from `w` to `v` can carry, if the lattice is
    /// proper: the offset shifted by a unit vector outside the lattice.
    pub fn unreachable_label(&self, v: VertexId, w: VertexId) -> Option<Vec<i64>> {
        let c = self.lattice.missing_unit()?;
        let mut r = self.offset(v, w)?;
        r[c] += 1;
        Some(r)
    }
}

pub(crate) fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::semigroup::Functor;

    #[test]
    fn three_vertex_parity_lattice() {
        let g = builtins::three_vertex();
        let labels = Functor::degree(&g).vector_labels().unwrap();
        let p = Potentials::of_graph(&g, &labels, 2);
        assert_eq!(p.lattice.basis(), vec![vec![2, 0], vec![0, 1]]);
        let v = g.vertex_id("v").unwrap();
        assert_eq!(p.unreachable_label(v, v), Some(vec![1, 0]));
    }

    #[test]
    fn single_vertex_full_lattice() {
        let g = builtins::t(2).unwrap();
        let labels = Functor::degree(&g).vector_labels().unwrap();
        let p = Potentials::of_graph(&g, &labels, 2);
        assert!(p.lattice.is_full());
        assert_eq!(p.unreachable_label(0, 0), None);
    }
}
