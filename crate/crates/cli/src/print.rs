//! Canonical text form of a document. Comments and layout are not kept;
//! parsing the output gives back an equal document.

use std::fmt::Write;

use kgraph_core::{KGraph, Square};

use crate::document::{KgDocument, SemigroupKind};

pub fn print_kg(doc: &KgDocument) -> String {
    let mut out = String::new();
    if let Some(k) = doc.rank {
        writeln!(out, "kgraph {k}").unwrap();
    }
    if let Some(b) = &doc.builtin {
        write!(out, "builtin {}", b.name).unwrap();
        for (k, v) in &b.params {
            write!(out, " {k}={v}").unwrap();
        }
        out.push('\n');
    }
    for v in &doc.vertices {
        writeln!(out, "vertex {}", v.name).unwrap();
    }
    for e in &doc.edges {
        writeln!(out, "edge {} : {} {} <- {}", e.name.name, e.color, e.range.name, e.source.name).unwrap();
    }
    for s in &doc.squares {
        writeln!(out, "square {} {} = {} {}", s.left[0].name, s.left[1].name, s.right[0].name, s.right[1].name)
            .unwrap();
    }
    if let Some(s) = &doc.semigroup {
        match &s.kind {
            SemigroupKind::Zk(k) => writeln!(out, "semigroup Zk {k}").unwrap(),
            SemigroupKind::Nk(k) => writeln!(out, "semigroup Nk {k}").unwrap(),
            SemigroupKind::AffineNN => writeln!(out, "semigroup affine-nn").unwrap(),
            SemigroupKind::FreePlus(n) => writeln!(out, "semigroup free-plus {n}").unwrap(),
            SemigroupKind::Group { names, rows } => {
                let list = |xs: &[crate::document::Named]| xs.iter().map(|x| x.name.as_str()).collect::<Vec<_>>().join(" ");
                writeln!(out, "semigroup group {}", list(names)).unwrap();
                for (a, row) in names.iter().zip(rows) {
                    writeln!(out, "cayley {} : {}", a.name, list(row)).unwrap();
                }
            }
        }
    }
    for l in &doc.labels {
        writeln!(out, "label {} = {}", l.edge.name, l.element).unwrap();
    }
    if let Some(w) = &doc.window {
        writeln!(out, "window {}", w.spec).unwrap();
    }
    for d in &doc.directives {
        write!(out, "analyze {}", d.name).unwrap();
        for a in &d.args {
            write!(out, " {a}").unwrap();
        }
        for (k, v) in &d.options {
            write!(out, " --{k}={v}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// The explicit `.kg` form of a finite graph: its skeleton and squares.
pub fn graph_to_kg(g: &KGraph) -> String {
    let mut out = String::new();
    writeln!(out, "kgraph {}", g.rank()).unwrap();
    for v in 0..g.vertex_count() {
        writeln!(out, "vertex {}", g.vertex_name(v)).unwrap();
    }
    for e in g.skeleton().edges() {
        writeln!(out, "edge {} : {} {} <- {}", e.name, e.color, g.vertex_name(e.range), g.vertex_name(e.source))
            .unwrap();
    }
    for &Square { f, g: g1, g2, f2 } in g.squares() {
        writeln!(out, "square {} {} = {} {}", g.edge_name(f), g.edge_name(g1), g.edge_name(g2), g.edge_name(f2))
            .unwrap();
    }
    out
}
