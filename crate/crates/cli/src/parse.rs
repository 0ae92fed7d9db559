//! Line-oriented parser for `.kg` files.
//!
//! ```text
//! kgraph 2
//! vertex u v
//! edge e : 1 v <- u
//! square e c = t1 e
//! semigroup Zk 2
//! label e = (1,0)
//! window -3..3
//! analyze primitivity
//! ```
//!
//! Declarations may appear in any order; references are resolved once the
//! whole file has been read.

use std::collections::HashMap;

use kgraph_core::builtins::Builtin;
use kgraph_core::graph::MAX_RANK;
use kgraph_core::skew::Window;

use crate::document::*;
use crate::error::KgError;
use crate::model::semigroup_of;
use crate::run::DIRECTIVES;

#[derive(Debug, Clone, Copy)]
struct Tok<'a> {
    text: &'a str,
    /// Byte offset in the line.
    offset: usize,
    span: Span,
}

fn tokenize(line: &str, lineno: usize) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (i, ch)) in line.char_indices().enumerate() {
        if ch.is_whitespace() {
            if let Some((s, c)) = start.take() {
                out.push(Tok { text: &line[s..i], offset: s, span: Span::new(lineno, c + 1) });
            }
        } else if start.is_none() {
            start = Some((i, col));
        }
    }
    if let Some((s, c)) = start {
        out.push(Tok { text: &line[s..], offset: s, span: Span::new(lineno, c + 1) });
    }
    out
}

fn syntax(span: Span, message: impl Into<String>) -> KgError {
    KgError::Syntax { line: span.line, column: span.column, message: message.into() }
}

const RESERVED: &[&str] = &[":", "=", "<-"];

fn name(tok: &Tok) -> Result<Named, KgError> {
    if RESERVED.contains(&tok.text) {
        return Err(syntax(tok.span, format!("expected a name, found `{}`", tok.text)));
    }
    Ok(Named { name: tok.text.to_string(), span: tok.span })
}

fn expect(tok: Option<&Tok>, want: &str, end: Span) -> Result<(), KgError> {
    match tok {
        Some(t) if t.text == want => Ok(()),
        Some(t) => Err(syntax(t.span, format!("expected `{want}`, found `{}`", t.text))),
        None => Err(syntax(end, format!("expected `{want}`"))),
    }
}

fn number(tok: &Tok, what: &str) -> Result<usize, KgError> {
    tok.text.parse().map_err(|_| syntax(tok.span, format!("expected {what}, found `{}`", tok.text)))
}

fn exact_len(toks: &[Tok], n: usize, usage: &str, end: Span) -> Result<(), KgError> {
    if toks.len() < n {
        return Err(syntax(end, format!("incomplete line; expected `{usage}`")));
    }
    if toks.len() > n {
        return Err(syntax(toks[n].span, format!("unexpected `{}`; expected `{usage}`", toks[n].text)));
    }
    Ok(())
}

/// Everything after token `i`, trimmed.
fn rest<'a>(line: &'a str, toks: &[Tok], i: usize) -> Option<(&'a str, Span)> {
    toks.get(i).map(|t| (line[t.offset..].trim_end(), t.span))
}

/// Parse and resolve a document. Graph-level validation (the
/// factorization rules, functoriality) happens in [`crate::model::Model`].
pub fn parse_kg(text: &str) -> Result<KgDocument, KgError> {
    let mut doc = KgDocument::default();
    let mut rank_span = Span::default();
    let mut cayley: Vec<(Named, Vec<Named>)> = Vec::new();
    let mut graph_lines: Option<Span> = None;

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokenize(line, lineno);
        let Some(head) = toks.first() else { continue };
        let end = Span::new(lineno, line.chars().count() + 1);
        match head.text {
            "kgraph" => {
                exact_len(&toks, 2, "kgraph <k>", end)?;
                if doc.rank.is_some() {
                    return Err(syntax(head.span, "second `kgraph` header"));
                }
                let k = number(&toks[1], "a rank")?;
                if k == 0 || k > MAX_RANK {
                    return Err(syntax(toks[1].span, format!("rank must be between 1 and {MAX_RANK}")));
                }
                doc.rank = Some(k);
                rank_span = head.span;
            }
            "builtin" => {
                if toks.len() < 2 {
                    return Err(syntax(end, "expected `builtin <name> [key=value ...]`"));
                }
                if doc.builtin.is_some() {
                    return Err(syntax(head.span, "second `builtin` line"));
                }
                let mut params = Vec::new();
                for t in &toks[2..] {
                    let (k, v) = t
                        .text
                        .split_once('=')
                        .ok_or_else(|| syntax(t.span, format!("expected `key=value`, found `{}`", t.text)))?;
                    params.push((k.to_string(), v.to_string()));
                }
                doc.builtin = Some(BuiltinDecl { name: toks[1].text.to_string(), params, span: head.span });
            }
            "vertex" => {
                if toks.len() < 2 {
                    return Err(syntax(end, "expected `vertex <name> ...`"));
                }
                graph_lines.get_or_insert(head.span);
                for t in &toks[1..] {
                    doc.vertices.push(name(t)?);
                }
            }
            "edge" => {
                exact_len(&toks, 7, "edge <name> : <color> <range> <- <source>", end)?;
                graph_lines.get_or_insert(head.span);
                expect(toks.get(2), ":", end)?;
                expect(toks.get(5), "<-", end)?;
                doc.edges.push(EdgeDecl {
                    name: name(&toks[1])?,
                    color: number(&toks[3], "a color")?,
                    range: name(&toks[4])?,
                    source: name(&toks[6])?,
                    span: head.span,
                });
            }
            "square" => {
                exact_len(&toks, 6, "square <e1> <e2> = <e3> <e4>", end)?;
                graph_lines.get_or_insert(head.span);
                expect(toks.get(3), "=", end)?;
                doc.squares.push(SquareDecl {
                    left: [name(&toks[1])?, name(&toks[2])?],
                    right: [name(&toks[4])?, name(&toks[5])?],
                    span: head.span,
                });
            }
            "semigroup" => {
                if doc.semigroup.is_some() {
                    return Err(syntax(head.span, "second `semigroup` declaration"));
                }
                let kind_tok = toks.get(1).ok_or_else(|| {
                    syntax(end, "expected `semigroup <Zk|Nk|group|affine-nn|free-plus> [params]`")
                })?;
                let kind = match kind_tok.text {
                    "Zk" | "Nk" | "free-plus" => {
                        exact_len(&toks, 3, &format!("semigroup {} <n>", kind_tok.text), end)?;
                        let n = number(&toks[2], "a positive integer")?;
                        if n == 0 {
                            return Err(syntax(toks[2].span, "expected a positive integer"));
                        }
                        match kind_tok.text {
                            "Zk" => SemigroupKind::Zk(n),
                            "Nk" => SemigroupKind::Nk(n),
                            _ => SemigroupKind::FreePlus(n),
                        }
                    }
                    "affine-nn" => {
                        exact_len(&toks, 2, "semigroup affine-nn", end)?;
                        SemigroupKind::AffineNN
                    }
                    "group" => {
                        if toks.len() < 3 {
                            return Err(syntax(end, "expected `semigroup group <identity> <element> ...`"));
                        }
                        let names = toks[2..].iter().map(name).collect::<Result<Vec<_>, _>>()?;
                        SemigroupKind::Group { names, rows: Vec::new() }
                    }
                    other => {
                        return Err(syntax(
                            kind_tok.span,
                            format!("unknown semigroup `{other}` (expected Zk, Nk, group, affine-nn or free-plus)"),
                        ))
                    }
                };
                doc.semigroup = Some(SemigroupDecl { kind, span: head.span });
            }
            "cayley" => {
                if toks.len() < 4 {
                    return Err(syntax(end, "expected `cayley <a> : <a·x1> <a·x2> ...`"));
                }
                expect(toks.get(2), ":", end)?;
                let row = toks[3..].iter().map(name).collect::<Result<Vec<_>, _>>()?;
                cayley.push((name(&toks[1])?, row));
            }
            "label" => {
                if toks.len() < 4 {
                    return Err(syntax(end, "expected `label <edge> = <element>`"));
                }
                expect(toks.get(2), "=", end)?;
                let (element, span) = rest(line, &toks, 3).unwrap();
                doc.labels.push(LabelDecl { edge: name(&toks[1])?, element: element.to_string(), span });
            }
            "window" => {
                let Some((spec, _)) = rest(line, &toks, 1) else {
                    return Err(syntax(end, "expected `window <spec>`"));
                };
                if doc.window.is_some() {
                    return Err(syntax(head.span, "second `window` declaration"));
                }
                doc.window = Some(WindowDecl { spec: spec.to_string(), span: toks[1].span });
            }
            "analyze" => {
                let Some(dir) = toks.get(1) else {
                    return Err(syntax(end, "expected `analyze <directive> [--key=value ...]`"));
                };
                if !DIRECTIVES.contains(&dir.text) {
                    return Err(KgError::UnknownReference {
                        line: lineno,
                        column: dir.span.column,
                        kind: "directive",
                        name: dir.text.to_string(),
                    });
                }
                let mut args = Vec::new();
                let mut options: Vec<(String, String)> = Vec::new();
                for t in &toks[2..] {
                    if let Some(opt) = t.text.strip_prefix("--") {
                        let (k, v) = opt.split_once('=').unwrap_or((opt, "true"));
                        if k.is_empty() {
                            return Err(syntax(t.span, "empty option name"));
                        }
                        if options.iter().any(|(o, _)| o == k) {
                            return Err(syntax(t.span, format!("option `--{k}` given twice")));
                        }
                        options.push((k.to_string(), v.to_string()));
                    } else {
                        args.push(t.text.to_string());
                    }
                }
                doc.directives.push(DirectiveDecl { name: dir.text.to_string(), args, options, span: head.span });
            }
            other => return Err(syntax(head.span, format!("unknown keyword `{other}`"))),
        }
    }

    resolve(&mut doc, rank_span, cayley, graph_lines)?;
    Ok(doc)
}

fn check_unique<'a>(
    items: impl IntoIterator<Item = &'a Named>,
    kind: &'static str,
) -> Result<HashMap<&'a str, usize>, KgError> {
    let mut seen: HashMap<&str, usize> = HashMap::new();
    for n in items {
        if let Some(&first) = seen.get(n.name.as_str()) {
            return Err(KgError::DuplicateName {
                line: n.span.line,
                column: n.span.column,
                kind,
                name: n.name.clone(),
                first,
            });
        }
        seen.insert(&n.name, n.span.line);
    }
    Ok(seen)
}

fn known(table: &HashMap<&str, usize>, n: &Named, kind: &'static str) -> Result<(), KgError> {
    if table.contains_key(n.name.as_str()) {
        Ok(())
    } else {
        Err(KgError::UnknownReference { line: n.span.line, column: n.span.column, kind, name: n.name.clone() })
    }
}

fn resolve(
    doc: &mut KgDocument,
    rank_span: Span,
    cayley: Vec<(Named, Vec<Named>)>,
    graph_lines: Option<Span>,
) -> Result<(), KgError> {
    // Edge names, either declared or supplied by the builtin.
    let builtin_edges: Vec<Named>;
    let edge_names: HashMap<&str, usize> = if let Some(b) = &doc.builtin {
        if let Some(span) = graph_lines {
            return Err(syntax(span, "a builtin graph cannot be extended with vertex, edge or square lines"));
        }
        let params: Vec<(&str, &str)> = b.params.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
        let g = Builtin::from_params(&b.name, &params)
            .and_then(|x| x.build())
            .map_err(|source| KgError::Invalid { line: b.span.line, source })?;
        if let Some(k) = doc.rank {
            if k != g.rank() {
                return Err(syntax(rank_span, format!("rank {k} does not match builtin `{}` of rank {}", b.name, g.rank())));
            }
        }
        builtin_edges =
            (0..g.edge_count()).map(|e| Named { name: g.edge_name(e).to_string(), span: b.span }).collect();
        check_unique(&builtin_edges, "edge")?
    } else {
        let Some(k) = doc.rank else {
            return Err(syntax(Span::new(1, 1), "missing `kgraph <k>` header"));
        };
        let vertices = check_unique(&doc.vertices, "vertex")?;
        for e in &doc.edges {
            if e.color == 0 || e.color > k {
                return Err(KgError::Invalid {
                    line: e.span.line,
                    source: kgraph_core::KGraphError::BadColor { color: e.color, rank: k },
                });
            }
            known(&vertices, &e.range, "vertex")?;
            known(&vertices, &e.source, "vertex")?;
        }
        let edges = check_unique(doc.edges.iter().map(|e| &e.name), "edge")?;
        for s in &doc.squares {
            for n in s.left.iter().chain(&s.right) {
                known(&edges, n, "edge")?;
            }
        }
        edges
    };

    if let Some(SemigroupDecl { kind: SemigroupKind::Group { names, rows }, span }) = &mut doc.semigroup {
        let index = check_unique(names.iter(), "group element")?;
        let mut slots: Vec<Option<Vec<Named>>> = vec![None; names.len()];
        for (a, row) in cayley {
            known(&index, &a, "group element")?;
            let i = names.iter().position(|n| n.name == a.name).unwrap();
            if slots[i].is_some() {
                return Err(KgError::DuplicateName {
                    line: a.span.line,
                    column: a.span.column,
                    kind: "cayley row",
                    name: a.name,
                    first: slots[i].as_ref().unwrap()[0].span.line,
                });
            }
            if row.len() != names.len() {
                return Err(syntax(a.span, format!("row has {} entries, the group has {}", row.len(), names.len())));
            }
            for x in &row {
                known(&index, x, "group element")?;
            }
            slots[i] = Some(row);
        }
        if let Some(i) = slots.iter().position(Option::is_none) {
            return Err(syntax(*span, format!("missing `cayley {} : ...` row", names[i].name)));
        }
        *rows = slots.into_iter().map(Option::unwrap).collect();
    } else if let Some((a, _)) = cayley.first() {
        return Err(syntax(a.span, "`cayley` rows need `semigroup group ...`"));
    }

    let semigroup = doc.semigroup.as_ref().map(semigroup_of).transpose()?;
    let labelled: Vec<&Named> = doc.labels.iter().map(|l| &l.edge).collect();
    check_unique(labelled, "label")?;
    for l in &doc.labels {
        known(&edge_names, &l.edge, "edge")?;
        let Some(s) = &semigroup else {
            return Err(syntax(l.edge.span, "labels need a `semigroup` declaration"));
        };
        s.parse_element(&l.element).map_err(|e| syntax(l.span, e.to_string()))?;
    }
    if let Some(w) = &doc.window {
        let Some(s) = &semigroup else {
            return Err(syntax(w.span, "a window needs a `semigroup` declaration"));
        };
        Window::parse(&w.spec, s).map_err(|e| syntax(w.span, e.to_string()))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document() {
        let doc = parse_kg("kgraph 1\nvertex v\nedge e : 1 v <- v\n").unwrap();
        assert_eq!(doc.rank, Some(1));
        assert_eq!(doc.vertices.len(), 1);
        assert_eq!(doc.edges[0].name.name, "e");
    }

    #[test]
    fn columns_count_characters() {
        let err = parse_kg("kgraph 2\nvertex ü\nedge e : 1 ü <- x").unwrap_err();
        assert_eq!(err, KgError::UnknownReference { line: 3, column: 17, kind: "vertex", name: "x".into() });
    }

    #[test]
    fn comments_and_blank_lines() {
        let doc = parse_kg("# header\n\nkgraph 1 # rank\nvertex v # the vertex\n").unwrap();
        assert_eq!(doc.vertices[0].name, "v");
    }

    #[test]
    fn wrong_arrow() {
        let err = parse_kg("kgraph 1\nvertex v\nedge e : 1 v -> v").unwrap_err();
        assert!(matches!(err, KgError::Syntax { line: 3, column: 14, .. }), "{err}");
    }
}
