//! Executing `analyze` directives against a model and collecting a report.

use std::collections::BTreeMap;
use std::time::Instant;

use kgraph_core::algebra::{component_matrices, is_primitive, strong_connectivity, IntMatrix};
use kgraph_core::deciders::aperiodicity::{is_aperiodic, skew_aperiodic};
use kgraph_core::deciders::cofinality::{cofinal_search, is_cofinal};
use kgraph_core::deciders::frontier::{frontier_scan, growth_hypothesis};
use kgraph_core::deciders::gamma::gamma_eta;
use kgraph_core::deciders::simplicity::{simplicity_report, Simplicity, Target};
use kgraph_core::deciders::system::{s_primitive, system_cofinal, system_search, uniformly_upper_dense, upper_dense};
use kgraph_core::semigroup::{validate_functor, Functor};
use kgraph_core::skew::{skew_product, Window};
use kgraph_core::verdict::{SearchBounds, Status};
use kgraph_core::{Degree, KGraphError, Result as CoreResult};

use crate::document::{DirectiveDecl, Span};
use crate::error::RunError;
use crate::model::Model;
use crate::report::{GraphSummary, Outcome, Report, DirectiveResult, SkewSummary, ValidationSummary, REPORT_SCHEMA};

/// Every directive `analyze` understands.
pub const DIRECTIVES: &[&str] = &[
    "validate",
    "matrices",
    "strong-connectivity",
    "primitivity",
    "cofinality",
    "cofinal-search",
    "aperiodicity",
    "upper-dense",
    "uniformly-upper-dense",
    "s-primitive",
    "system-cofinal",
    "system-search",
    "skew-aperiodic",
    "gamma",
    "frontier",
    "growth",
    "simplicity",
    "skew",
];

const BOUND_OPTIONS: &[&str] = &["pair-degree", "cofinal-degree", "depth", "radius", "steps"];

/// Global bound overrides, applied before per-directive options.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Overrides {
    /// Caps `m, n` in aperiodicity searches and `N` in cofinality searches.
    pub max_degree: Option<u32>,
    /// Caps path lengths per color (otherwise the Wielandt-type default).
    pub max_depth: Option<u32>,
    /// Record per-directive wall-clock time. Off by default so that
    /// reports are reproducible byte for byte.
    pub timing: bool,
}

impl Overrides {
    /// Read `KGRAPH_MAX_DEPTH` from the environment.
    pub fn from_env() -> std::result::Result<Self, String> {
        let mut o = Overrides::default();
        if let Ok(v) = std::env::var("KGRAPH_MAX_DEPTH") {
            let depth = v.trim().parse::<u32>().ok().filter(|&d| d > 0);
            o.max_depth = Some(depth.ok_or_else(|| format!("KGRAPH_MAX_DEPTH must be a positive integer, got `{v}`"))?);
        }
        Ok(o)
    }

    pub fn bounds(&self) -> SearchBounds {
        let mut b = SearchBounds::default();
        if let Some(d) = self.max_degree {
            b.max_pair_degree = d;
            b.max_cofinal_degree = d;
        }
        if let Some(d) = self.max_depth {
            b.max_path_depth = Some(d);
        }
        b
    }
}

/// The directives run when a document has none.
pub fn default_directives(model: &Model) -> Vec<DirectiveDecl> {
    let mut names = vec!["validate", "strong-connectivity"];
    if model.graph.is_finite() {
        names.push("primitivity");
    }
    names.extend(["cofinality", "aperiodicity"]);
    if model.functor.is_some() {
        names.push("system-cofinal");
    }
    names
        .into_iter()
        .map(|n| DirectiveDecl { name: n.to_string(), args: Vec::new(), options: Vec::new(), span: Span::default() })
        .collect()
}

fn precondition(msg: String) -> KGraphError {
    KGraphError::Precondition(msg)
}

fn parse_u32(d: &DirectiveDecl, key: &str) -> CoreResult<Option<u32>> {
    d.option(key)
        .map(|v| v.parse::<u32>().map_err(|_| precondition(format!("--{key} must be a nonnegative integer, got `{v}`"))))
        .transpose()
}

fn bounds_for(base: &SearchBounds, d: &DirectiveDecl) -> CoreResult<SearchBounds> {
    let mut b = base.clone();
    if let Some(x) = parse_u32(d, "pair-degree")? {
        b.max_pair_degree = x;
    }
    if let Some(x) = parse_u32(d, "cofinal-degree")? {
        b.max_cofinal_degree = x;
    }
    if let Some(x) = parse_u32(d, "depth")? {
        b.max_path_depth = Some(x);
    }
    if let Some(x) = parse_u32(d, "radius")? {
        b.sample_radius = i64::from(x);
    }
    if let Some(x) = parse_u32(d, "steps")? {
        b.max_steps = u64::from(x);
    }
    Ok(b)
}

fn check_options(d: &DirectiveDecl, allowed: &[&str]) -> CoreResult<()> {
    for (k, _) in &d.options {
        if !allowed.contains(&k.as_str()) && !BOUND_OPTIONS.contains(&k.as_str()) {
            return Err(precondition(format!("`{}` takes no option `--{k}`", d.name)));
        }
    }
    Ok(())
}

fn check_args(d: &DirectiveDecl, max: usize) -> CoreResult<()> {
    if d.args.len() > max {
        return Err(precondition(format!("unexpected argument `{}`", d.args[max])));
    }
    Ok(())
}

/// `(a,b)` or `a,b`.
pub fn parse_degree(text: &str, rank: usize) -> CoreResult<Degree> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    let coords = inner
        .split(',')
        .map(|c| c.trim().parse::<u32>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| precondition(format!("cannot read `{text}` as a degree")))?;
    if coords.len() != rank {
        return Err(KGraphError::RankMismatch { got: coords.len(), rank });
    }
    Ok(Degree::from_slice(&coords))
}

fn functor_for(model: &Model, d: &DirectiveDecl) -> CoreResult<Functor> {
    match d.option("eta") {
        Some("degree") => Ok(Functor::degree_into_zk(&model.graph)),
        Some("degree-n") => Ok(Functor::degree(&model.graph)),
        Some(other) => Err(precondition(format!("--eta must be `degree` or `degree-n`, got `{other}`"))),
        None => model.functor.clone().ok_or_else(|| {
            KGraphError::HypothesisUnmet(format!(
                "`{}` needs a functor: declare a semigroup and labels, or pass --eta=degree",
                d.name
            ))
        }),
    }
}

fn matrix_rows(m: &IntMatrix) -> Vec<Vec<String>> {
    m.rows()
}

fn execute(model: &Model, d: &DirectiveDecl, base: &SearchBounds) -> CoreResult<Outcome> {
    let g = &model.graph;
    let bounds = bounds_for(base, d)?;
    let verdict = |claim: &str, v: kgraph_core::verdict::Verdict| Outcome::Verdict { claim: claim.to_string(), verdict: v };
    let functor_opts: &[&str] = &["eta"];
    match d.name.as_str() {
        "validate" => {
            check_args(d, 0)?;
            check_options(d, &[])?;
            let functor = model.functor.as_ref().map(|eta| validate_functor(g, eta));
            Ok(Outcome::Validation(ValidationSummary {
                valid: functor.as_ref().is_none_or(|r| r.is_valid()),
                squares_checked: functor.map(|r| r.squares_checked),
                sources: g.has_sources(),
                sinks: g.has_sinks(),
            }))
        }
        "matrices" => {
            check_args(d, 0)?;
            check_options(d, &["degree"])?;
            let cm = component_matrices(g)?;
            let mut commute = true;
            for i in 0..cm.rank() {
                for j in i + 1..cm.rank() {
                    let (a, b) = (&cm.matrices[i], &cm.matrices[j]);
                    commute &= a.mul(b) == b.mul(a);
                }
            }
            let degree = d.option("degree").map(|t| parse_degree(t, g.rank())).transpose()?;
            let power = degree.as_ref().map(|n| matrix_rows(&cm.power(n)));
            Ok(Outcome::Matrices {
                vertices: cm.vertices.clone(),
                matrices: cm.matrices.iter().map(matrix_rows).collect(),
                commute,
                degree,
                power,
            })
        }
        "strong-connectivity" => {
            check_args(d, 0)?;
            check_options(d, &[])?;
            Ok(verdict("Λ is strongly connected", strong_connectivity(g)))
        }
        "primitivity" => {
            check_args(d, 0)?;
            check_options(d, &[])?;
            Ok(verdict("Λ is primitive", is_primitive(g)?))
        }
        "cofinality" => {
            check_args(d, 0)?;
            check_options(d, &[])?;
            Ok(verdict("Λ is cofinal", is_cofinal(g, &bounds)?))
        }
        "cofinal-search" => {
            check_args(d, 0)?;
            check_options(d, &[])?;
            Ok(verdict("Λ is cofinal", cofinal_search(g, &bounds)?))
        }
        "aperiodicity" => {
            check_args(d, 0)?;
            check_options(d, &[])?;
            Ok(verdict("Λ is aperiodic", is_aperiodic(g, &bounds)?))
        }
        "upper-dense" | "uniformly-upper-dense" | "s-primitive" | "system-cofinal" | "system-search"
        | "skew-aperiodic" => {
            check_args(d, 0)?;
            check_options(d, functor_opts)?;
            let eta = functor_for(model, d)?;
            let (claim, v) = match d.name.as_str() {
                "upper-dense" => ("η is upper dense", upper_dense(g, &eta, &bounds)?),
                "uniformly-upper-dense" => ("η is upper dense at every vertex", uniformly_upper_dense(g, &eta, &bounds)?),
                "s-primitive" => ("η is S-primitive", s_primitive(g, &eta, &bounds)?),
                "system-cofinal" => ("(Λ, S, η) is cofinal", system_cofinal(g, &eta, &bounds)?),
                "system-search" => ("(Λ, S, η) is cofinal", system_search(g, &eta, &bounds)?),
                _ => ("Λ ×_η S is aperiodic", skew_aperiodic(g, &eta, &bounds)?),
            };
            Ok(verdict(claim, v))
        }
        "gamma" => {
            check_args(d, 0)?;
            check_options(d, &["eta", "bound"])?;
            let eta = functor_for(model, d)?;
            let bound = parse_u32(d, "bound")?.unwrap_or(bounds.max_pair_degree);
            Ok(Outcome::Gamma { report: gamma_eta(g, &eta, bound)? })
        }
        "frontier" => {
            check_args(d, 0)?;
            check_options(d, &["vertex", "max"])?;
            let v = match d.option("vertex") {
                Some(name) => g.vertex_id(name)?,
                None => 0,
            };
            let max = parse_u32(d, "max")?.unwrap_or(3);
            Ok(Outcome::Frontier { scan: frontier_scan(g, v, max, &bounds)? })
        }
        "growth" => {
            check_args(d, 0)?;
            check_options(d, &[])?;
            Ok(verdict("every s(wΛ^{ℕeᵢ}) is infinite", growth_hypothesis(g, &bounds)?))
        }
        "simplicity" => {
            check_args(d, 1)?;
            check_options(d, &["target", "eta"])?;
            let target: Target = match (d.args.first().map(String::as_str), d.option("target")) {
                (Some(a), None) | (None, Some(a)) => a.parse()?,
                (Some(_), Some(_)) => return Err(precondition("give the target once".into())),
                (None, None) => return Err(precondition("simplicity needs a target".into())),
            };
            let eta = match target {
                Target::CstarOfSkew | Target::FixedPointAlgebra => Some(functor_for(model, d)?),
                _ => None,
            };
            Ok(Outcome::Simplicity { report: simplicity_report(target, g, eta.as_ref(), &bounds)? })
        }
        "skew" => {
            check_args(d, 0)?;
            check_options(d, &["eta", "window", "strict"])?;
            let eta = functor_for(model, d)?;
            let window = match d.option("window") {
                Some(spec) => Window::parse(spec, eta.semigroup())?,
                None => model.window.clone().ok_or_else(|| {
                    KGraphError::HypothesisUnmet("`skew` needs a window: declare one or pass --window=SPEC".into())
                })?,
            };
            let strict = matches!(d.option("strict"), Some("true"));
            let skew = skew_product(g, &eta, &window, strict)?;
            let h = skew.graph();
            Ok(Outcome::Skew(SkewSummary {
                semigroup: eta.semigroup().name(),
                window: window.to_string(),
                vertices: h.vertex_count(),
                edges: h.edge_count(),
                squares: h.squares().len(),
                clipped: (0..h.vertex_count()).filter(|&v| h.is_clipped(v)).count(),
            }))
        }
        other => Err(precondition(format!("unknown directive `{other}`"))),
    }
}

/// Run `directives` in order. The report is deterministic for identical
/// inputs unless timing is requested.
pub fn run(model: &Model, directives: &[DirectiveDecl], overrides: &Overrides) -> Result<Report, RunError> {
    let base = overrides.bounds();
    let mut results = Vec::with_capacity(directives.len());
    for d in directives {
        let start = Instant::now();
        let outcome = execute(model, d, &base).map_err(|source| RunError {
            directive: d.name.clone(),
            line: d.span.line,
            source,
        })?;
        results.push(DirectiveResult {
            directive: d.name.clone(),
            line: d.span.line,
            args: d.args.clone(),
            options: d.options.iter().cloned().collect::<BTreeMap<_, _>>(),
            outcome,
            elapsed_us: overrides.timing.then(|| start.elapsed().as_micros() as u64),
        });
    }
    let g = &model.graph;
    Ok(Report {
        schema: REPORT_SCHEMA.to_string(),
        graph: GraphSummary {
            name: g.name().to_string(),
            rank: g.rank(),
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            squares: g.squares().len(),
            finite: g.is_finite(),
        },
        semigroup: model.functor.as_ref().map(|f| f.semigroup().name()),
        bounds: base,
        results,
    })
}

impl Report {
    /// 2 when any verdict is Unknown, otherwise 0.
    pub fn exit_code(&self) -> i32 {
        let unknown = self.results.iter().any(|r| match &r.outcome {
            Outcome::Verdict { verdict, .. } => verdict.status == Status::Unknown,
            Outcome::Simplicity { report } => report.status == Simplicity::Unknown,
            Outcome::Gamma { report } => report.verdict.status == Status::Unknown,
            _ => false,
        });
        if unknown {
            2
        } else {
            0
        }
    }
}
