//! Three-valued verdicts with certificates, and the search bounds that
//! semi-decisions run under.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::degree::Degree;
use crate::graph::PathRepr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Holds,
    Fails,
    Unknown,
}

/// How far a non-`Unknown` verdict reaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    /// A complete certificate or an exact decision procedure.
    Exact,
    /// Verified on every instance inside the search bounds only.
    UpToBounds,
}

/// The procedure that produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// A component matrix has a zero row or column.
    ZeroLine,
    /// Powers of `M_1⋯M_k` up to the Wielandt bound.
    WielandtPower,
    /// Strong connectivity fails on a source or sink.
    SourcesOrSinks,
    /// Strongly connected components of the skeleton.
    SkeletonScc,
    /// Finite, no sinks or sources: cofinal iff strongly connected.
    CofinalIffStronglyConnected,
    /// Per-pair search for a cofinality degree.
    CofinalSearch,
    /// One vertex, one edge per color: all segments of equal degree agree.
    DeterministicSingleVertex,
    /// Finite, one edge of each color into every vertex: segments that
    /// start at the same vertex coincide.
    Deterministic,
    /// Search for paths separating the two segments.
    SeparationSearch,
    /// A homomorphism `φ` with `φ∘η = d`.
    DegreeFactorization,
    /// A skew product over an aperiodic base is aperiodic.
    AperiodicBase,
    /// Lifting through an r-path-lifting morphism onto an aperiodic graph.
    PathLifting,
    /// Degree functor into `ℤᵏ`: system cofinality iff primitivity.
    PrimitivityCriterion,
    /// S-primitive and upper dense implies cofinal.
    PrimitiveAndUpperDense,
    /// Path labels stay in fixed cosets of an integer lattice.
    ResidueLattice,
    /// `Γ(η)` misses part of the group.
    SpectrumGap,
    /// A nonempty set of vertices where some label coordinate never grows.
    ZeroGrowthSet,
    /// The full skew product is finite and decided exactly.
    FiniteSkewProduct,
    /// Bounded search on the definition.
    DirectSearch,
    /// The degree functor is upper dense when there are no sources.
    DegreeIsUpperDense,
    /// Exact dominance analysis over the condensation of the skeleton.
    RecurrentSupport,
    /// Single-vertex cone analysis of realized labels.
    LabelCone,
    /// Exhaustive closure of realized labels in a finite group.
    GroupClosure,
    /// The semigroup has no strictly positive element.
    NoStrictlyPositive,
    /// Cycle labels generate the whole group.
    CycleGeneration,
    /// Coordinatewise comparison in `ℕᵏ`.
    Coordinatewise,
    /// Every element of a group dominates every other.
    GroupOrder,
    /// Divisibility in the affine semigroup.
    Divisibility,
    /// Vertex, edge or degree counts differ.
    InvariantCounts,
    /// Backtracking search for a degree-preserving bijection.
    Backtracking,
    /// Enumeration of lifts of codomain paths.
    LiftEnumeration,
    /// Strict growth of the frontier sets.
    FrontierGrowth,
    /// Read off directly from the definition.
    Definition,
}

impl Route {
    pub fn describe(self) -> &'static str {
        match self {
            Route::ZeroLine => "a component matrix has a zero row or column",
            Route::WielandtPower => "powers of M1...Mk up to the Wielandt bound",
            Route::SourcesOrSinks => "sources or sinks rule out strong connectivity",
            Route::SkeletonScc => "strongly connected components of the skeleton",
            Route::CofinalIffStronglyConnected => {
                "finite with no sinks or sources: cofinal iff strongly connected"
            }
            Route::CofinalSearch => "bounded search for cofinality degrees",
            Route::DeterministicSingleVertex => "single vertex with one edge per color",
            Route::Deterministic => "one edge of each color into every vertex",
            Route::SeparationSearch => "bounded search for separating paths",
            Route::DegreeFactorization => "a homomorphism phi with phi(eta) = d",
            Route::AperiodicBase => "skew product over an aperiodic base",
            Route::PathLifting => "r-path lifting onto an aperiodic graph",
            Route::PrimitivityCriterion => "degree functor: cofinal iff primitive",
            Route::PrimitiveAndUpperDense => "S-primitive and upper dense",
            Route::ResidueLattice => "labels confined to lattice cosets",
            Route::SpectrumGap => "Gamma(eta) is a proper subset of the group",
            Route::ZeroGrowthSet => "a closed vertex set on which a label coordinate never grows",
            Route::FiniteSkewProduct => "finite skew product decided exactly",
            Route::DirectSearch => "bounded search on the definition",
            Route::DegreeIsUpperDense => "degree functor without sources",
            Route::RecurrentSupport => "label growth over the condensation of the skeleton",
            Route::LabelCone => "cone of realized labels at a single vertex",
            Route::GroupClosure => "closure of realized labels in a finite group",
            Route::NoStrictlyPositive => "the semigroup has no strictly positive element",
            Route::CycleGeneration => "cycle labels generate the group",
            Route::Coordinatewise => "coordinatewise comparison",
            Route::GroupOrder => "groups are totally directed",
            Route::Divisibility => "divisibility in the affine semigroup",
            Route::InvariantCounts => "vertex, edge or square counts differ",
            Route::Backtracking => "backtracking search for a bijection",
            Route::LiftEnumeration => "enumeration of lifts",
            Route::FrontierGrowth => "growth of the frontier sets",
            Route::Definition => "definition",
        }
    }
}

/// A certificate attached to a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    None,
    /// A degree that works, e.g. `N` with `M^N > 0`.
    Degree { degree: Degree },
    /// `M_color` has a zero `line` ("row" or "column") at `vertex`.
    ZeroLine { color: usize, vertex: String, line: String },
    /// The cyclic classes of an irreducible, imprimitive matrix.
    CyclicClasses { period: u64, classes: Vec<Vec<String>> },
    /// The strongly connected components of a reducible structure.
    Components { components: Vec<Vec<String>> },
    /// A vertex lacking edges of one color in one direction.
    SourceOrSink { vertex: String, color: usize, side: String },
    /// A cycle `alpha` at `vertex` reaching some start vertex via `connector`.
    Cycle { vertex: String, cycle: PathRepr, connector: PathRepr },
    /// `path` separates the segments at `m` and `n`.
    Separation { vertex: String, m: Degree, n: Degree, path: PathRepr, left: PathRepr, right: PathRepr },
    /// Local periodicity at `vertex` for the pair `(m, n)`.
    Periodicity { vertex: String, m: Degree, n: Degree },
    /// Rows of the map `φ` (target coordinates), as rationals.
    DegreeFactorization { phi: Vec<Vec<String>> },
    /// Cofinality degrees for every pair inside the bounds.
    CofinalDegrees { pairs: usize, max_degree: Degree, example: Option<(String, String, Degree)> },
    /// A sampled system-cofinality instance and the degree meeting it.
    SystemPairs { instances: usize, max_degree: Degree },
    /// Path labels between the vertices lie in cosets of `lattice`; the
    /// element `required` can never be realized, so `(v, w, a, b)` fails.
    Residue {
        lattice: Vec<Vec<i64>>,
        v: String,
        w: String,
        a: String,
        b: String,
        required: Vec<i64>,
        reason: String,
    },
    /// On `vertices` the labels never grow in `coordinate`; `a`, `b`
    /// violate the definition at `vertex`.
    ZeroGrowth { coordinate: usize, vertices: Vec<String>, vertex: String, a: String, b: String },
    /// A semigroup element, e.g. the `t` of S-primitivity or a group
    /// element outside `Γ(η)`.
    Element { element: String, detail: String },
    /// A codomain path without the required lifts.
    Lift { vertex: String, path: PathRepr, lifts: usize },
    /// An explicit degree-preserving bijection (vertex part).
    Isomorphism { vertex_map: Vec<(String, String)>, edges: usize, rule: String },
    /// An invariant that differs between two graphs.
    Mismatch { invariant: String, left: String, right: String },
    /// Frontier growth evidence.
    Frontier { vertex: String, sizes: Vec<(Degree, usize)> },
    /// Search exhausted within bounds.
    Exhausted { explored: u64, reason: String },
    Note { text: String },
}

/// Bounds for semi-decision procedures. All fields are positive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    /// `m, n` range over `[0, max_pair_degree]ᵏ` in aperiodicity checks.
    pub max_pair_degree: u32,
    /// Per-coordinate cap on path degrees; `None` means `2(|Λ⁰|-1)²+2`.
    pub max_path_depth: Option<u32>,
    /// Per-coordinate cap on cofinality degrees `N`.
    pub max_cofinal_degree: u32,
    /// Radius of the sampled `(a, b)` box for universally quantified
    /// semigroup elements.
    pub sample_radius: i64,
    /// Cap on elementary search steps before giving up.
    pub max_steps: u64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_pair_degree: 4,
            max_path_depth: None,
            max_cofinal_degree: 8,
            sample_radius: 3,
            max_steps: 5_000_000,
        }
    }
}

impl SearchBounds {
    /// Effective path-depth cap for a graph with `vertices` vertices.
    pub fn path_depth(&self, vertices: usize) -> u32 {
        self.max_path_depth.unwrap_or_else(|| {
            let n = vertices.saturating_sub(1) as u64;
            (2 * n * n + 2).min(u32::MAX as u64) as u32
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub scope: Scope,
    pub route: Route,
    pub witness: Witness,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// The bounds a bounded search ran under.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<SearchBounds>,
}

impl Verdict {
    pub fn holds(route: Route, witness: Witness) -> Self {
        Verdict { status: Status::Holds, scope: Scope::Exact, route, witness, notes: Vec::new(), bounds: None }
    }

    pub fn fails(route: Route, witness: Witness) -> Self {
        Verdict { status: Status::Fails, scope: Scope::Exact, route, witness, notes: Vec::new(), bounds: None }
    }

    pub fn unknown(route: Route, bounds: &SearchBounds, witness: Witness) -> Self {
        Verdict {
            status: Status::Unknown,
            scope: Scope::UpToBounds,
            route,
            witness,
            notes: Vec::new(),
            bounds: Some(bounds.clone()),
        }
    }

    /// Mark a verdict as valid only inside `bounds`.
    pub fn up_to(mut self, bounds: &SearchBounds) -> Self {
        self.scope = Scope::UpToBounds;
        self.bounds = Some(bounds.clone());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.status == Status::Fails
    }

    pub fn is_unknown(&self) -> bool {
        self.status == Status::Unknown
    }

    pub fn is_exact(&self) -> bool {
        self.status != Status::Unknown && self.scope == Scope::Exact
    }

    /// True when the two verdicts do not contradict each other.
    pub fn consistent_with(&self, other: &Verdict) -> bool {
        matches!(
            (self.status, other.status),
            (Status::Unknown, _) | (_, Status::Unknown) | (Status::Holds, Status::Holds) | (Status::Fails, Status::Fails)
        )
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Unknown => "unknown",
        })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.status)?;
        if self.status != Status::Unknown && self.scope == Scope::UpToBounds {
            write!(f, " (up to bounds)")?;
        }
        write!(f, " via {}", self.route.describe())
    }
}
