//! Building the k-graph, functor and window a document describes.

use kgraph_core::builtins::Builtin;
use kgraph_core::semigroup::{validate_functor, Element, FiniteGroup, Functor, Semigroup};
use kgraph_core::skew::Window;
use kgraph_core::{KGraph, KGraphError, Skeleton};

use crate::document::{KgDocument, SemigroupDecl, SemigroupKind};
use crate::error::KgError;

pub fn semigroup_of(decl: &SemigroupDecl) -> Result<Semigroup, KgError> {
    Ok(match &decl.kind {
        SemigroupKind::Zk(k) => Semigroup::Zk { k: *k },
        SemigroupKind::Nk(k) => Semigroup::Nk { k: *k },
        SemigroupKind::AffineNN => Semigroup::AffineNN,
        SemigroupKind::FreePlus(n) => Semigroup::FreePlus { n: *n },
        SemigroupKind::Group { names, rows } => {
            let index = |s: &str| names.iter().position(|n| n.name == s).unwrap();
            let table = rows.iter().map(|r| r.iter().map(|x| index(&x.name)).collect()).collect();
            let names = names.iter().map(|n| n.name.clone()).collect();
            let group = FiniteGroup::new(names, table).map_err(|source| KgError::Invalid { line: decl.span.line, source })?;
            Semigroup::FiniteGroup { group }
        }
    })
}

/// A validated document: the graph, and the functor and window when the
/// document declares a semigroup.
#[derive(Debug, Clone)]
pub struct Model {
    pub graph: KGraph,
    pub functor: Option<Functor>,
    pub window: Option<Window>,
}

impl Model {
    /// `name` is used for explicit graphs; builtins keep their own.
    pub fn from_doc(doc: &KgDocument, name: &str) -> Result<Self, KgError> {
        let graph = build_graph(doc, name)?;
        let mut functor = None;
        let mut window = None;
        if let Some(decl) = &doc.semigroup {
            let s = semigroup_of(decl)?;
            let invalid = |line: usize| move |source: KGraphError| KgError::Invalid { line, source };
            if !doc.labels.is_empty() {
                let mut named: Vec<(&str, Element)> = Vec::with_capacity(doc.labels.len());
                for l in &doc.labels {
                    let x = s.parse_element(&l.element).map_err(invalid(l.span.line))?;
                    named.push((l.edge.name.as_str(), x));
                }
                let eta = Functor::from_names(&graph, s.clone(), &named).map_err(invalid(decl.span.line))?;
                let report = validate_functor(&graph, &eta);
                if let Some(v) = report.violations.first() {
                    return Err(KgError::Invalid {
                        line: decl.span.line,
                        source: KGraphError::InvalidFunctor(format!(
                            "labels disagree on square {}: {} vs {}",
                            v.square, v.left, v.right
                        )),
                    });
                }
                functor = Some(eta);
            }
            if let Some(w) = &doc.window {
                window = Some(Window::parse(&w.spec, &s).map_err(invalid(w.span.line))?);
            }
        }
        Ok(Model { graph, functor, window })
    }
}

fn build_graph(doc: &KgDocument, name: &str) -> Result<KGraph, KgError> {
    if let Some(b) = &doc.builtin {
        let params: Vec<(&str, &str)> = b.params.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
        return Builtin::from_params(&b.name, &params)
            .and_then(|x| x.build())
            .map_err(|source| KgError::Invalid { line: b.span.line, source });
    }
    let rank = doc.rank.expect("resolved documents have a rank");
    let first_line = |line: Option<usize>| line.unwrap_or(1);
    let mut sk = Skeleton::new(rank).map_err(|source| KgError::Invalid { line: 1, source })?;
    for v in &doc.vertices {
        sk.add_vertex(v.name.clone()).map_err(|source| KgError::Invalid { line: v.span.line, source })?;
    }
    for e in &doc.edges {
        sk.add_edge(e.name.name.clone(), e.color, &e.range.name, &e.source.name)
            .map_err(|source| KgError::Invalid { line: e.span.line, source })?;
    }
    let mut squares = Vec::with_capacity(doc.squares.len());
    for s in &doc.squares {
        let sq = sk
            .square(&s.left[0].name, &s.left[1].name, &s.right[0].name, &s.right[1].name)
            .map_err(|source| KgError::Invalid { line: s.span.line, source })?;
        squares.push(sq);
    }
    KGraph::new(name, sk, squares).map_err(|source| {
        let line = match &source {
            KGraphError::MalformedSquare { index, .. } => doc.squares.get(*index).map(|s| s.span.line),
            _ => doc.squares.first().map(|s| s.span.line),
        };
        KgError::Invalid { line: first_line(line), source }
    })
}
