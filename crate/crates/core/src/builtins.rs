//! Named k-graphs used throughout the test suites and the CLI.

use crate::error::{KGraphError, Result};
use crate::graph::{Boundary, KGraph, Skeleton, Square};

/// A builtin graph with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Builtin {
    /// One vertex with one loop of each color.
    T { k: usize },
    /// The window `[lo, hi]ᵏ` of the grid graph on `ℤᵏ`.
    Delta { k: usize, lo: i64, hi: i64 },
    /// One vertex, `m` blue loops, `n` red loops, squares given by `theta`.
    /// `theta[(i-1)*n + (j-1)]` is the 0-based index of `(i', j')` in the
    /// same layout, meaning `f_i g_j = g_{j'} f_{i'}`.
    F2Theta { m: usize, n: usize, theta: Vec<usize> },
    /// One vertex with two loops `e`, `f`.
    B2,
    /// The strongly connected, non-primitive 2-graph on `u, v, w`.
    ThreeVertex,
    /// A window `[0,width]×[0,height]` of the quarter-plane 2-graph with
    /// the corner removed. It is cofinal while its skeleton is not.
    Ladder { width: i64, height: i64 },
}

pub const BUILTIN_NAMES: &[&str] = &["t", "delta", "f2-theta", "b2", "three-vertex", "ladder"];

impl Builtin {
    /// Resolve a name and `key=value` parameters.
    pub fn from_params(name: &str, params: &[(&str, &str)]) -> Result<Self> {
        let bad = |reason: String| KGraphError::BadParams { name: name.to_string(), reason };
        let get = |key: &str| params.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
        let int = |key: &str, default: i64| -> Result<i64> {
            match get(key) {
                None => Ok(default),
                Some(v) => v.trim().parse().map_err(|_| bad(format!("`{key}` must be an integer, got `{v}`"))),
            }
        };
        let allowed: &[&str] = match name {
            "t" => &["k"],
            "delta" => &["k", "lo", "hi"],
            "f2-theta" => &["m", "n", "theta"],
            "ladder" => &["width", "height"],
            "b2" | "three-vertex" => &[],
            other => return Err(KGraphError::UnknownBuiltin(other.to_string())),
        };
        if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(k)) {
            return Err(bad(format!("unknown parameter `{k}`")));
        }
        let positive = |key: &str, default: i64| -> Result<usize> {
            let v = int(key, default)?;
            if v < 1 {
                return Err(bad(format!("`{key}` must be positive")));
            }
            Ok(v as usize)
        };
        match name {
            "t" => Ok(Builtin::T { k: positive("k", 2)? }),
            "delta" => Ok(Builtin::Delta { k: positive("k", 2)?, lo: int("lo", -2)?, hi: int("hi", 2)? }),
            "f2-theta" => {
                let m = positive("m", 1)?;
                let n = positive("n", 1)?;
                let theta = match get("theta") {
                    None => (0..m * n).collect(),
                    Some(list) => list
                        .split(',')
                        .map(|s| s.trim().parse::<usize>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| bad("`theta` must be a comma-separated index list".into()))?,
                };
                Ok(Builtin::F2Theta { m, n, theta })
            }
            "b2" => Ok(Builtin::B2),
            "three-vertex" => Ok(Builtin::ThreeVertex),
            "ladder" => Ok(Builtin::Ladder { width: int("width", 4)?, height: int("height", 4)? }),
            _ => unreachable!(),
        }
    }

    pub fn build(&self) -> Result<KGraph> {
        match self {
            Builtin::T { k } => t(*k),
            Builtin::Delta { k, lo, hi } => delta(*k, *lo, *hi),
            Builtin::F2Theta { m, n, theta } => f2_theta(*m, *n, theta),
            Builtin::B2 => Ok(b2()),
            Builtin::ThreeVertex => Ok(three_vertex()),
            Builtin::Ladder { width, height } => ladder(*width, *height),
        }
    }
}

/// Build a builtin by name.
pub fn builtin(name: &str, params: &[(&str, &str)]) -> Result<KGraph> {
    Builtin::from_params(name, params)?.build()
}

pub fn t(k: usize) -> Result<KGraph> {
    let mut sk = Skeleton::new(k)?;
    sk.add_vertex("v")?;
    for i in 1..=k {
        sk.add_edge(format!("f{i}"), i, "v", "v")?;
    }
    let mut squares = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            squares.push(Square { f: i, g: j, g2: j, f2: i });
        }
    }
    KGraph::new(format!("T{k}"), sk, squares)
}

pub fn b2() -> KGraph {
    let mut sk = Skeleton::new(1).unwrap();
    sk.add_vertex("v").unwrap();
    sk.add_edge("e", 1, "v", "v").unwrap();
    sk.add_edge("f", 1, "v", "v").unwrap();
    KGraph::new("B2", sk, Vec::new()).unwrap()
}

pub fn f2_theta(m: usize, n: usize, theta: &[usize]) -> Result<KGraph> {
    let bad = |reason: String| KGraphError::BadParams { name: "f2-theta".into(), reason };
    if theta.len() != m * n {
        return Err(bad(format!("theta must list {} images, got {}", m * n, theta.len())));
    }
    let mut seen = vec![false; m * n];
    for &p in theta {
        if p >= m * n || std::mem::replace(&mut seen[p], true) {
            return Err(bad("theta is not a bijection".into()));
        }
    }
    let mut sk = Skeleton::new(2)?;
    sk.add_vertex("v")?;
    for i in 1..=m {
        sk.add_edge(format!("f{i}"), 1, "v", "v")?;
    }
    for j in 1..=n {
        sk.add_edge(format!("g{j}"), 2, "v", "v")?;
    }
    let blue = |i: usize| i;
    let red = |j: usize| m + j;
    let squares = (0..m * n)
        .map(|p| {
            let (i, j) = (p / n, p % n);
            let (i2, j2) = (theta[p] / n, theta[p] % n);
            Square { f: blue(i), g: red(j), g2: red(j2), f2: blue(i2) }
        })
        .collect();
    KGraph::new(format!("F2theta({m},{n})"), sk, squares)
}

/// Vertex name for a lattice point, e.g. `(0,-1)`.
pub fn point_name(p: &[i64]) -> String {
    let parts: Vec<String> = p.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Edge name for the color-`i` edge with range `p` in a grid window.
pub fn grid_edge_name(color: usize, p: &[i64]) -> String {
    format!("e{color}@{}", point_name(p))
}

fn box_points(k: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut pts = vec![Vec::new()];
    for _ in 0..k {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    pts
}

/// Grid-shaped k-graph on a set of lattice points: the color-`i` edge with
/// range `p` has source `p + e_i`, and every unit square commutes.
fn grid(name: String, k: usize, points: Vec<Vec<i64>>) -> Result<KGraph> {
    use std::collections::HashSet;
    let set: HashSet<Vec<i64>> = points.iter().cloned().collect();
    let shift = |p: &[i64], i: usize, by: i64| {
        let mut q = p.to_vec();
        q[i - 1] += by;
        q
    };
    let mut sk = Skeleton::new(k)?;
    let mut boundary = Boundary::new(points.len());
    for p in &points {
        sk.add_vertex(point_name(p))?;
    }
    for (idx, p) in points.iter().enumerate() {
        for i in 1..=k {
            let up = shift(p, i, 1);
            if set.contains(&up) {
                sk.add_edge(grid_edge_name(i, p), i, &point_name(p), &point_name(&up))?;
            } else {
                boundary.range_clipped[idx] |= 1 << (i - 1);
            }
            if !set.contains(&shift(p, i, -1)) {
                boundary.source_clipped[idx] |= 1 << (i - 1);
            }
        }
    }
    let mut squares = Vec::new();
    for p in &points {
        for i in 1..=k {
            for j in i + 1..=k {
                let (pi, pj) = (shift(p, i, 1), shift(p, j, 1));
                let pij = shift(&pi, j, 1);
                if set.contains(&pi) && set.contains(&pj) && set.contains(&pij) {
                    squares.push(Square {
                        f: sk.edge_id(&grid_edge_name(i, p))?,
                        g: sk.edge_id(&grid_edge_name(j, &pi))?,
                        g2: sk.edge_id(&grid_edge_name(j, p))?,
                        f2: sk.edge_id(&grid_edge_name(i, &pj))?,
                    });
                }
            }
        }
    }
    KGraph::windowed(name, sk, squares, boundary)
}

/// The window `[lo, hi]ᵏ` of `Δ_k`, with vertex `m` and edge `e_i@m` from
/// `m + e_i` to `m`.
pub fn delta(k: usize, lo: i64, hi: i64) -> Result<KGraph> {
    if lo > hi {
        return Err(KGraphError::BadParams { name: "delta".into(), reason: "empty window".into() });
    }
    grid(format!("Delta{k}[{lo},{hi}]"), k, box_points(k, lo, hi))
}

/// The quarter-plane 2-graph without its corner, windowed to
/// `[0,width]×[0,height]`. Color 1 runs horizontally, color 2 vertically.
pub fn ladder(width: i64, height: i64) -> Result<KGraph> {
    if width < 1 || height < 1 {
        return Err(KGraphError::BadParams {
            name: "ladder".into(),
            reason: "width and height must be at least 1".into(),
        });
    }
    let points = box_points(2, 0, width.max(height))
        .into_iter()
        .filter(|p| p[0] <= width && p[1] <= height && (p[0], p[1]) != (0, 0))
        .collect();
    let g = grid(format!("Ladder[{width}x{height}]"), 2, points)?;
    // The missing corner is a genuine absence, not clipping: (1,0) and (0,1)
    // are sinks of the full graph in colors 1 and 2 respectively.
    let mut boundary = g.boundary().cloned().unwrap();
    let unclip = |b: &mut Boundary, name: &str, color: usize| {
        let v = g.vertex_id(name).unwrap();
        b.source_clipped[v] &= !(1 << (color - 1));
    };
    unclip(&mut boundary, "(1,0)", 1);
    unclip(&mut boundary, "(0,1)", 2);
    for y in 1..=height {
        unclip(&mut boundary, &point_name(&[0, y]), 1);
    }
    for x in 1..=width {
        unclip(&mut boundary, &point_name(&[x, 0]), 2);
    }
    KGraph::windowed(g.name().to_string(), g.skeleton().clone(), g.squares().to_vec(), boundary)
}

pub fn three_vertex() -> KGraph {
    let mut sk = Skeleton::new(2).unwrap();
    for v in ["u", "v", "w"] {
        sk.add_vertex(v).unwrap();
    }
    let blue = [("e", "v", "u"), ("f", "u", "v"), ("g", "w", "v"), ("h", "v", "w")];
    let red = [
        ("a", "w", "u"),
        ("b", "u", "w"),
        ("c", "u", "u"),
        ("d", "w", "w"),
        ("t1", "v", "v"),
        ("t2", "v", "v"),
    ];
    for (name, r, s) in blue {
        sk.add_edge(name, 1, r, s).unwrap();
    }
    for (name, r, s) in red {
        sk.add_edge(name, 2, r, s).unwrap();
    }
    let rules = [
        ("e", "c", "t1", "e"),
        ("h", "a", "t2", "e"),
        ("f", "t1", "c", "f"),
        ("f", "t2", "b", "g"),
        ("h", "d", "t1", "h"),
        ("e", "b", "t2", "h"),
        ("g", "t1", "d", "g"),
        ("g", "t2", "a", "f"),
    ];
    let squares = rules.iter().map(|(f, g, g2, f2)| sk.square(f, g, g2, f2).unwrap()).collect();
    KGraph::new("three-vertex", sk, squares).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::Degree;

    #[test]
    fn shapes() {
        let g = t(2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), g.squares().len()), (1, 2, 1));
        let g = three_vertex();
        assert_eq!((g.vertex_count(), g.edge_count(), g.squares().len()), (3, 10, 8));
        let g = b2();
        assert_eq!((g.rank(), g.vertex_count(), g.edge_count()), (1, 1, 2));
        let g = f2_theta(2, 2, &[1, 0, 3, 2]).unwrap();
        assert_eq!(g.squares().len(), 4);
    }

    #[test]
    fn bad_theta_rejected() {
        assert!(matches!(f2_theta(2, 2, &[0, 0, 1, 2]), Err(KGraphError::BadParams { .. })));
        assert!(matches!(builtin("nope", &[]), Err(KGraphError::UnknownBuiltin(_))));
        assert!(matches!(builtin("t", &[("k", "x")]), Err(KGraphError::BadParams { .. })));
    }

    #[test]
    fn delta_window_boundary() {
        let g = delta(2, -1, 1).unwrap();
        assert_eq!(g.vertex_count(), 9);
        let top = g.vertex_id("(1,1)").unwrap();
        assert!(g.is_clipped(top));
        let mid = g.vertex_id("(0,0)").unwrap();
        assert!(!g.is_clipped(mid));
        assert!(!g.has_sources() && !g.has_sinks());
        assert_eq!(g.paths_from(mid, &Degree::from([1, 1])).unwrap().len(), 1);
        assert!(matches!(
            g.paths_from(mid, &Degree::from([2, 0])),
            Err(KGraphError::WindowExceeded { .. })
        ));
    }

    #[test]
    fn ladder_has_sinks_not_sources() {
        let g = ladder(3, 3).unwrap();
        assert!(!g.has_sources());
        assert!(g.has_sinks());
    }
}
