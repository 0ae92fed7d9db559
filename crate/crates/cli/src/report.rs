//! The `report-v1` document and its text and JSON encodings.

use std::collections::BTreeMap;
use std::fmt::Write;

use kgraph_core::deciders::frontier::FrontierScan;
use kgraph_core::deciders::gamma::GammaReport;
use kgraph_core::deciders::simplicity::{Simplicity, SimplicityReport};
use kgraph_core::verdict::{SearchBounds, Verdict, Witness};
use kgraph_core::{Degree, PathRepr};
use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA: &str = "report-v1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub name: String,
    pub rank: usize,
    pub vertices: usize,
    pub edges: usize,
    pub squares: usize,
    /// False for windows of infinite graphs.
    pub finite: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationSummary {
    pub valid: bool,
    /// Squares checked for the functor, when one is declared.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub squares_checked: Option<usize>,
    pub sources: bool,
    pub sinks: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewSummary {
    pub semigroup: String,
    pub window: String,
    pub vertices: usize,
    pub edges: usize,
    pub squares: usize,
    /// Vertices with edges cut off by the window.
    pub clipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    Verdict { claim: String, verdict: Verdict },
    Simplicity { report: SimplicityReport },
    Gamma { report: GammaReport },
    Matrices {
        vertices: Vec<String>,
        /// `M_1, …, M_k`, entries as decimal strings.
        matrices: Vec<Vec<Vec<String>>>,
        commute: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        degree: Option<Degree>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        power: Option<Vec<Vec<String>>>,
    },
    Frontier { scan: FrontierScan },
    Skew(SkewSummary),
    Validation(ValidationSummary),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectiveResult {
    pub directive: String,
    /// Source line of the directive, 0 when supplied on the command line.
    pub line: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub args: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub options: BTreeMap<String, String>,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_us: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub graph: GraphSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semigroup: Option<String>,
    pub bounds: SearchBounds,
    pub results: Vec<DirectiveResult>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => text(report),
    }
}

/// The serde name of a unit enum value, so that text and JSON agree.
fn tag<T: Serialize>(x: &T) -> String {
    match serde_json::to_value(x) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}

/// `claim: status [scope] via route`, the verdict line of the text form.
pub fn verdict_line(claim: &str, v: &Verdict) -> String {
    format!("{claim}: {} [{}] via {}", tag(&v.status), tag(&v.scope), tag(&v.route))
}

fn list(xs: &[String]) -> String {
    format!("{{{}}}", xs.join(", "))
}

fn path(p: &PathRepr) -> String {
    format!("{p} : {} <- {} of degree {}", p.range, p.source, p.degree)
}

pub fn witness_text(w: &Witness) -> Option<String> {
    Some(match w {
        Witness::None => return None,
        Witness::Degree { degree } => format!("degree {degree}"),
        Witness::ZeroLine { color, vertex, line } => format!("M{color} has a zero {line} at `{vertex}`"),
        Witness::CyclicClasses { period, classes } => {
            let cs: Vec<String> = classes.iter().map(|c| list(c)).collect();
            format!("period {period}, cyclic classes {}", cs.join(" "))
        }
        Witness::Components { components } => {
            let cs: Vec<String> = components.iter().map(|c| list(c)).collect();
            format!("components {}", cs.join(" "))
        }
        Witness::SourceOrSink { vertex, color, side } => format!("`{vertex}` is a {side} in color {color}"),
        Witness::Cycle { vertex, cycle, connector } => {
            format!("cycle {} at `{vertex}`, connector {}", path(cycle), path(connector))
        }
        Witness::Separation { vertex, m, n, path: p, left, right } => format!(
            "at `{vertex}`, {} separates m={m}, n={n}: segments {left} and {right}",
            path(p)
        ),
        Witness::Periodicity { vertex, m, n } => format!("local periodicity at `{vertex}` for m={m}, n={n}"),
        Witness::DegreeFactorization { phi } => {
            let rows: Vec<String> = phi.iter().map(|r| format!("[{}]", r.join(","))).collect();
            format!("phi = [{}]", rows.join(","))
        }
        Witness::CofinalDegrees { pairs, max_degree, example } => {
            let mut s = format!("{pairs} pairs met within degree {max_degree}");
            if let Some((v, w, n)) = example {
                write!(s, ", e.g. `{v}`, `{w}` at {n}").unwrap();
            }
            s
        }
        Witness::SystemPairs { instances, max_degree } => {
            format!("{instances} sampled instances met within degree {max_degree}")
        }
        Witness::Residue { lattice, v, w, a, b, required, reason } => {
            let basis: Vec<String> =
                lattice.iter().map(|r| format!("({})", r.iter().map(i64::to_string).collect::<Vec<_>>().join(","))).collect();
            let req = required.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
            let pair = if a.is_empty() && b.is_empty() { String::new() } else { format!(", a={a}, b={b}") };
            format!(
                "labels lie in cosets of the lattice spanned by {}; v=`{v}`, w=`{w}`{pair} would need ({req}); {reason}",
                basis.join(" ")
            )
        }
        Witness::ZeroGrowth { coordinate, vertices, vertex, a, b } => format!(
            "coordinate {coordinate} never grows on {}; a={a}, b={b} fail at `{vertex}`",
            list(vertices)
        ),
        Witness::Element { element, detail } => format!("{element}: {detail}"),
        Witness::Lift { vertex, path: p, lifts } => format!("{} at `{vertex}` has {lifts} lifts", path(p)),
        Witness::Isomorphism { vertex_map, edges, rule } => {
            format!("{} vertices and {edges} edges matched by {rule}", vertex_map.len())
        }
        Witness::Mismatch { invariant, left, right } => format!("{invariant}: {left} vs {right}"),
        Witness::Frontier { vertex, sizes } => {
            let s: Vec<String> = sizes.iter().map(|(n, c)| format!("{n}:{c}")).collect();
            format!("|V(n, {vertex})| = {}", s.join(" "))
        }
        Witness::Exhausted { explored, reason } => format!("{explored} steps explored; {reason}"),
        Witness::Note { text } => text.clone(),
    })
}

fn verdict_block(out: &mut String, indent: &str, claim: &str, v: &Verdict) {
    writeln!(out, "{indent}{}", verdict_line(claim, v)).unwrap();
    if let Some(w) = witness_text(&v.witness) {
        writeln!(out, "{indent}  witness: {w}").unwrap();
    }
    for n in &v.notes {
        writeln!(out, "{indent}  note: {n}").unwrap();
    }
}

fn matrix(out: &mut String, label: &str, rows: &[Vec<String>]) {
    let width = rows.iter().flatten().map(String::len).max().unwrap_or(1);
    writeln!(out, "  {label} =").unwrap();
    for r in rows {
        let cells: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
        writeln!(out, "    [{}]", cells.join(" ")).unwrap();
    }
}

fn text(report: &Report) -> String {
    let mut out = String::new();
    let g = &report.graph;
    writeln!(
        out,
        "graph {}: rank {}, {} vertices, {} edges, {} squares{}",
        g.name,
        g.rank,
        g.vertices,
        g.edges,
        g.squares,
        if g.finite { "" } else { " (window)" }
    )
    .unwrap();
    if let Some(s) = &report.semigroup {
        writeln!(out, "semigroup {s}").unwrap();
    }
    for r in &report.results {
        out.push('\n');
        write!(out, "analyze {}", r.directive).unwrap();
        for a in &r.args {
            write!(out, " {a}").unwrap();
        }
        for (k, v) in &r.options {
            write!(out, " --{k}={v}").unwrap();
        }
        if r.line > 0 {
            write!(out, "  (line {})", r.line).unwrap();
        }
        if let Some(us) = r.elapsed_us {
            write!(out, "  [{us} µs]").unwrap();
        }
        out.push('\n');
        match &r.outcome {
            Outcome::Verdict { claim, verdict } => verdict_block(&mut out, "  ", claim, verdict),
            Outcome::Simplicity { report: s } => {
                let scope = if s.status == Simplicity::Unknown { String::new() } else { format!(" [{}]", tag(&s.scope)) };
                writeln!(out, "  {}: {}{scope}", s.target, tag(&s.status)).unwrap();
                writeln!(out, "  basis: {}", s.basis).unwrap();
                for step in &s.chain {
                    verdict_block(&mut out, "    ", &step.claim, &step.verdict);
                }
                if let Some(b) = &s.blocking {
                    writeln!(out, "  blocking: {b}").unwrap();
                }
            }
            Outcome::Gamma { report: gr } => {
                verdict_block(&mut out, "  ", "Γ(η) = G", &gr.verdict);
                let more = if gr.found_count > gr.found.len() { ", ..." } else { "" };
                writeln!(
                    out,
                    "  found {} element{}{}: {}{more}",
                    gr.found_count,
                    if gr.found_count == 1 { "" } else { "s" },
                    if gr.complete { " (all of Γ(η))" } else { "" },
                    gr.found.join(" ")
                )
                .unwrap();
            }
            Outcome::Matrices { vertices, matrices, commute, degree, power } => {
                writeln!(out, "  vertices: {}", vertices.join(" ")).unwrap();
                for (i, m) in matrices.iter().enumerate() {
                    matrix(&mut out, &format!("M{}", i + 1), m);
                }
                writeln!(out, "  commute: {commute}").unwrap();
                if let (Some(n), Some(p)) = (degree, power) {
                    matrix(&mut out, &format!("M^{n}"), p);
                }
            }
            Outcome::Frontier { scan } => {
                writeln!(out, "  vertex `{}`, degrees up to {}", scan.vertex, scan.max).unwrap();
                let sizes: Vec<String> = scan.sizes.iter().map(|(n, c)| format!("{n}:{c}")).collect();
                writeln!(out, "  |V(n)|: {}", sizes.join(" ")).unwrap();
                for s in &scan.stabilizations {
                    writeln!(
                        out,
                        "  stabilizes at {} in color {} (checked {} further steps, persists: {})",
                        s.at, s.color, s.checked, s.persists
                    )
                    .unwrap();
                }
                verdict_block(&mut out, "  ", "every s(wΛ^{ℕeᵢ}) is infinite", &scan.growth);
                verdict_block(&mut out, "  ", "Λ ×_d ℤᵏ is not cofinal", &scan.skew_not_cofinal);
            }
            Outcome::Skew(s) => {
                writeln!(
                    out,
                    "  Λ ×_η {} on window {}: {} vertices, {} edges, {} squares, {} clipped vertices",
                    s.semigroup, s.window, s.vertices, s.edges, s.squares, s.clipped
                )
                .unwrap();
            }
            Outcome::Validation(v) => {
                writeln!(out, "  valid: {}", v.valid).unwrap();
                if let Some(n) = v.squares_checked {
                    writeln!(out, "  functor checked on {n} squares").unwrap();
                }
                writeln!(out, "  sources: {}, sinks: {}", v.sources, v.sinks).unwrap();
            }
        }
    }
    out
}

impl Report {
    /// Every verdict in the report with the claim it decides, in order.
    pub fn verdicts(&self) -> Vec<(String, &Verdict)> {
        let mut out = Vec::new();
        for r in &self.results {
            match &r.outcome {
                Outcome::Verdict { claim, verdict } => out.push((claim.clone(), verdict)),
                Outcome::Simplicity { report } => {
                    out.extend(report.chain.iter().map(|s| (s.claim.clone(), &s.verdict)));
                }
                Outcome::Gamma { report } => out.push(("Γ(η) = G".to_string(), &report.verdict)),
                Outcome::Frontier { scan } => {
                    out.push(("every s(wΛ^{ℕeᵢ}) is infinite".to_string(), &scan.growth));
                    out.push(("Λ ×_d ℤᵏ is not cofinal".to_string(), &scan.skew_not_cofinal));
                }
                _ => {}
            }
        }
        out
    }
}
