//! Graph generators and brute-force oracles shared by the integration suites.

#![allow(dead_code)]

use kgraph_core::{Degree, KGraph, Skeleton, Square};

/// A 1-graph from an edge list `(range, source)` on `n` vertices.
pub fn one_graph(n: usize, edges: &[(usize, usize)]) -> KGraph {
    let mut sk = Skeleton::new(1).unwrap();
    for v in 0..n {
        sk.add_vertex(format!("x{v}")).unwrap();
    }
    for (i, &(r, s)) in edges.iter().enumerate() {
        sk.add_edge(format!("e{i}"), 1, &format!("x{r}"), &format!("x{s}")).unwrap();
    }
    KGraph::new("one", sk, Vec::new()).unwrap()
}

/// Cartesian product of two 1-graphs: vertices `(a, b)`, blue edges
/// `(e, b)`, red edges `(a, f)`, and the squares `(e, r(f))(s(e), f) =
/// (r(e), f)(e, s(f))`.
pub fn product(a: &KGraph, b: &KGraph) -> KGraph {
    let mut sk = Skeleton::new(2).unwrap();
    let name = |x: usize, y: usize| format!("({},{})", a.vertex_name(x), b.vertex_name(y));
    for x in 0..a.vertex_count() {
        for y in 0..b.vertex_count() {
            sk.add_vertex(name(x, y)).unwrap();
        }
    }
    let blue = |e: usize, y: usize| format!("{}@{}", a.edge_name(e), b.vertex_name(y));
    let red = |x: usize, f: usize| format!("{}@{}", a.vertex_name(x), b.edge_name(f));
    for e in 0..a.edge_count() {
        let edge = a.edge(e);
        for y in 0..b.vertex_count() {
            sk.add_edge(blue(e, y), 1, &name(edge.range, y), &name(edge.source, y)).unwrap();
        }
    }
    for f in 0..b.edge_count() {
        let edge = b.edge(f);
        for x in 0..a.vertex_count() {
            sk.add_edge(red(x, f), 2, &name(x, edge.range), &name(x, edge.source)).unwrap();
        }
    }
    let mut squares = Vec::new();
    for e in 0..a.edge_count() {
        for f in 0..b.edge_count() {
            let (ea, fb) = (a.edge(e), b.edge(f));
            squares.push(Square {
                f: sk.edge_id(&blue(e, fb.range)).unwrap(),
                g: sk.edge_id(&red(ea.source, f)).unwrap(),
                g2: sk.edge_id(&red(ea.range, f)).unwrap(),
                f2: sk.edge_id(&blue(e, fb.source)).unwrap(),
            });
        }
    }
    KGraph::new("product", sk, squares).unwrap()
}

pub type Mat = Vec<Vec<u128>>;

pub fn matrices(g: &KGraph) -> Vec<Mat> {
    let n = g.vertex_count();
    let mut ms = vec![vec![vec![0u128; n]; n]; g.rank()];
    for e in g.skeleton().edges() {
        ms[e.color - 1][e.range][e.source] += 1;
    }
    ms
}

fn mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|l| a[i][l] * b[l][j]).sum()).collect()).collect()
}

pub fn power(ms: &[Mat], n: &Degree) -> Mat {
    let size = ms[0].len();
    let id: Mat = (0..size).map(|i| (0..size).map(|j| u128::from(i == j)).collect()).collect();
    ms.iter().zip(n.coords()).fold(id, |acc, (m, &e)| (0..e).fold(acc, |acc, _| mul(&acc, m)))
}

/// Some degree with all coordinates in `[1, 2(n-1)²+2]` has `M^N > 0`.
pub fn brute_primitive(g: &KGraph) -> bool {
    let n = g.vertex_count();
    let b = (2 * (n - 1) * (n - 1) + 2) as u32;
    let ms = matrices(g);
    let mut pattern: Vec<Vec<Vec<bool>>> = Vec::new();
    for m in &ms {
        pattern.push(m.iter().map(|r| r.iter().map(|&x| x > 0).collect()).collect());
    }
    let bool_mul = |a: &Vec<Vec<bool>>, b: &Vec<Vec<bool>>| -> Vec<Vec<bool>> {
        (0..n).map(|i| (0..n).map(|j| (0..n).any(|l| a[i][l] && b[l][j])).collect()).collect()
    };
    // Powers of each color pattern, then all products.
    let pows: Vec<Vec<Vec<Vec<bool>>>> = pattern
        .iter()
        .map(|p| {
            let mut out = vec![p.clone()];
            for _ in 1..b {
                out.push(bool_mul(out.last().unwrap(), p));
            }
            out
        })
        .collect();
    Degree::diagonal(g.rank(), b)
        .box_below()
        .into_iter()
        .filter(|d| d.coords().iter().all(|&c| c >= 1))
        .any(|d| {
            let prod = d
                .coords()
                .iter()
                .enumerate()
                .map(|(i, &c)| pows[i][c as usize - 1].clone())
                .reduce(|a, b| bool_mul(&a, &b))
                .unwrap();
            prod.iter().flatten().all(|&x| x)
        })
}

/// Strong connectivity with all-positive degrees: every vertex receives
/// and emits an edge of each color, and the skeleton is strongly connected
/// (then a cycle through every color can be spliced into any path).
pub fn brute_strongly_connected(g: &KGraph) -> bool {
    let n = g.vertex_count();
    let edges = g.skeleton().edges();
    for v in 0..n {
        for c in 1..=g.rank() {
            let has_in = edges.iter().any(|e| e.color == c && e.source == v);
            let has_out = edges.iter().any(|e| e.color == c && e.range == v);
            if !has_in || !has_out {
                return false;
            }
        }
    }
    (0..n).all(|start| {
        let mut seen = vec![false; n];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for e in edges.iter().filter(|e| e.range == x) {
                if !seen[e.source] {
                    seen[e.source] = true;
                    stack.push(e.source);
                }
            }
        }
        seen.iter().all(|&s| s)
    })
}
