//! The parsed form of a `.kg` file, before any graph is built.

/// A source position. Positions are carried for diagnostics only and do
/// not take part in equality, so a reprinted document compares equal to
/// the original.
#[derive(Debug, Clone, Copy, Default)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Eq for Span {}

impl Span {
    pub fn new(line: usize, column: usize) -> Self {
        Span { line, column }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Named {
    pub name: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuiltinDecl {
    pub name: String,
    pub params: Vec<(String, String)>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeDecl {
    pub name: Named,
    pub color: usize,
    pub range: Named,
    pub source: Named,
    pub span: Span,
}

/// `left[0] left[1] = right[0] right[1]`, both sides read range to source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareDecl {
    pub left: [Named; 2],
    pub right: [Named; 2],
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemigroupKind {
    Zk(usize),
    Nk(usize),
    /// Element names, identity first, and the Cayley rows: `rows[a][b]`
    /// names the product `a·b`.
    Group { names: Vec<Named>, rows: Vec<Vec<Named>> },
    AffineNN,
    FreePlus(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupDecl {
    pub kind: SemigroupKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelDecl {
    pub edge: Named,
    /// The element as written.
    pub element: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowDecl {
    pub spec: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectiveDecl {
    pub name: String,
    pub args: Vec<String>,
    /// `--key=value` pairs in source order; a bare `--flag` has value `true`.
    pub options: Vec<(String, String)>,
    pub span: Span,
}

impl DirectiveDecl {
    pub fn option(&self, key: &str) -> Option<&str> {
        self.options.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KgDocument {
    /// From `kgraph <k>`; optional when a builtin supplies the graph.
    pub rank: Option<usize>,
    pub builtin: Option<BuiltinDecl>,
    pub vertices: Vec<Named>,
    pub edges: Vec<EdgeDecl>,
    pub squares: Vec<SquareDecl>,
    pub semigroup: Option<SemigroupDecl>,
    pub labels: Vec<LabelDecl>,
    pub window: Option<WindowDecl>,
    pub directives: Vec<DirectiveDecl>,
}
