//! Semigroups, their enveloping groups, and edge-labelling functors.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::degree::Degree;
use crate::error::{KGraphError, Result};
use crate::graph::{EdgeId, KGraph, Square};
use crate::verdict::{Route, SearchBounds, Verdict, Witness};

/// A finite group given by its Cayley table. Element 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Check the table exhaustively: closure, identity at index 0,
    /// associativity and inverses (which give cancellativity).
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        let bad = |msg: String| KGraphError::InvalidSemigroup(msg);
        if n == 0 {
            return Err(bad("group has no elements".into()));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(bad(format!("Cayley table must be {n}x{n}")));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(bad("Cayley table entry out of range".into()));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(bad(format!("duplicate element `{name}`")));
            }
            if table[0][i] != i || table[i][0] != i {
                return Err(bad(format!("`{}` is not an identity for `{name}`", names[0])));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(bad(format!(
                            "not associative on ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == 0 && table[b][a] == 0) {
                Some(b) => inverse.push(b),
                None => return Err(bad(format!("`{}` has no inverse", names[a]))),
            }
        }
        Ok(FiniteGroup { names, table, inverse })
    }

    /// `ℤ/n` with elements `0..n`.
    pub fn cyclic(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::new(names, table).unwrap()
    }

    /// The symmetric group on three letters, as permutations of `012`.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let names = perms.iter().map(|p| p.iter().map(|d| d.to_string()).collect::<String>()).collect();
        // (p·q)(x) = p(q(x))
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table = perms
            .iter()
            .map(|p| perms.iter().map(|q| index([p[q[0]], p[q[1]], p[q[2]]])).collect())
            .collect();
        FiniteGroup::new(names, table).unwrap()
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }
}

/// The closed set of semigroups the deciders understand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Semigroup {
    Zk { k: usize },
    Nk { k: usize },
    FiniteGroup { group: FiniteGroup },
    /// `ℕ × ℕ^×` with `(m1,n1)⋆(m2,n2) = (m1 n2 + m2, n1 n2)`, the monoid
    /// of affine maps `x ↦ n x + m` under reversed composition.
    AffineNN,
    /// The free monoid on `n` generators.
    FreePlus { n: usize },
}

/// An element of a semigroup or of its enveloping group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Element {
    Vector(Vec<i64>),
    Group(usize),
    Affine { shift: BigRational, scale: BigRational },
    Word(Vec<u32>),
}

impl Element {
    pub fn as_vector(&self) -> Option<&[i64]> {
        match self {
            Element::Vector(v) => Some(v),
            _ => None,
        }
    }

    pub fn affine(shift: i64, scale: i64) -> Element {
        Element::Affine { shift: BigRational::from_integer(shift.into()), scale: BigRational::from_integer(scale.into()) }
    }
}

impl Semigroup {
    pub fn name(&self) -> String {
        match self {
            Semigroup::Zk { k } => format!("Z^{k}"),
            Semigroup::Nk { k } => format!("N^{k}"),
            Semigroup::FiniteGroup { group } => format!("group of order {}", group.order()),
            Semigroup::AffineNN => "affine N x N*".into(),
            Semigroup::FreePlus { n } => format!("free monoid on {n} generators"),
        }
    }

    pub fn is_group(&self) -> bool {
        matches!(self, Semigroup::Zk { .. } | Semigroup::FiniteGroup { .. })
    }

    pub fn is_left_reversible(&self) -> bool {
        !matches!(self, Semigroup::FreePlus { n } if *n >= 2)
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            Semigroup::Zk { .. } | Semigroup::Nk { .. } => true,
            Semigroup::FiniteGroup { group } => group.is_abelian(),
            Semigroup::AffineNN => false,
            Semigroup::FreePlus { n } => *n <= 1,
        }
    }

    /// `k` for `ℤᵏ` and `ℕᵏ`.
    pub fn vector_dim(&self) -> Option<usize> {
        match self {
            Semigroup::Zk { k } | Semigroup::Nk { k } => Some(*k),
            _ => None,
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            Semigroup::Zk { k } | Semigroup::Nk { k } => Element::Vector(vec![0; *k]),
            Semigroup::FiniteGroup { .. } => Element::Group(0),
            Semigroup::AffineNN => Element::affine(0, 1),
            Semigroup::FreePlus { .. } => Element::Word(Vec::new()),
        }
    }

    fn invalid(&self, x: &Element) -> KGraphError {
        KGraphError::InvalidElement(format!("{x:?} is not an element of {}", self.name()))
    }

    /// Check that `x` has the right shape for this semigroup or its
    /// enveloping group.
    pub fn check_shape(&self, x: &Element) -> Result<()> {
        let ok = match (self, x) {
            (Semigroup::Zk { k } | Semigroup::Nk { k }, Element::Vector(v)) => v.len() == *k,
            (Semigroup::FiniteGroup { group }, Element::Group(i)) => *i < group.order(),
            (Semigroup::AffineNN, Element::Affine { scale, .. }) => scale.is_positive(),
            (Semigroup::FreePlus { n }, Element::Word(w)) => w.iter().all(|&g| (g as usize) < *n),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(self.invalid(x))
        }
    }

    /// Membership in `S` itself (not just the enveloping group).
    pub fn contains(&self, x: &Element) -> bool {
        if self.check_shape(x).is_err() {
            return false;
        }
        match (self, x) {
            (Semigroup::Nk { .. }, Element::Vector(v)) => v.iter().all(|&c| c >= 0),
            (Semigroup::AffineNN, Element::Affine { shift, scale }) => {
                shift.is_integer() && !shift.is_negative() && scale.is_integer() && scale >= &BigRational::one()
            }
            _ => true,
        }
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_shape(a)?;
        self.check_shape(b)?;
        Ok(match (self, a, b) {
            (Semigroup::Zk { .. } | Semigroup::Nk { .. }, Element::Vector(x), Element::Vector(y)) => {
                Element::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (Semigroup::FiniteGroup { group }, Element::Group(x), Element::Group(y)) => {
                Element::Group(group.mul(*x, *y))
            }
            (
                Semigroup::AffineNN,
                Element::Affine { shift: m1, scale: n1 },
                Element::Affine { shift: m2, scale: n2 },
            ) => Element::Affine { shift: m1 * n2 + m2, scale: n1 * n2 },
            (Semigroup::FreePlus { .. }, Element::Word(x), Element::Word(y)) => {
                Element::Word(x.iter().chain(y).copied().collect())
            }
            _ => unreachable!("shapes checked"),
        })
    }

    /// Inverse in the enveloping group.
    pub fn inverse(&self, a: &Element) -> Result<Element> {
        self.check_shape(a)?;
        match (self, a) {
            (Semigroup::Zk { .. } | Semigroup::Nk { .. }, Element::Vector(x)) => {
                Ok(Element::Vector(x.iter().map(|c| -c).collect()))
            }
            (Semigroup::FiniteGroup { group }, Element::Group(x)) => Ok(Element::Group(group.inv(*x))),
            (Semigroup::AffineNN, Element::Affine { shift, scale }) => {
                let inv = scale.recip();
                Ok(Element::Affine { shift: -(shift * &inv), scale: inv })
            }
            _ => Err(KGraphError::UnsupportedSemigroup(format!(
                "{} has no enveloping group",
                self.name()
            ))),
        }
    }

    /// `g⁻¹h` in the enveloping group.
    pub fn difference(&self, g: &Element, h: &Element) -> Result<Element> {
        let gi = self.inverse(g)?;
        self.multiply(&gi, h)
    }

    /// The left-invariant preorder `h ≥_l g` iff `g⁻¹h ∈ S`.
    pub fn geq_l(&self, h: &Element, g: &Element) -> Result<bool> {
        if let Semigroup::FreePlus { .. } = self {
            return Err(KGraphError::UnsupportedSemigroup(format!(
                "{} is not left-reversible",
                self.name()
            )));
        }
        Ok(self.contains(&self.difference(g, h)?))
    }

    /// `tⁿ`.
    pub fn power(&self, t: &Element, n: u32) -> Result<Element> {
        (0..n).try_fold(self.identity(), |acc, _| self.multiply(&acc, t))
    }

    pub fn format(&self, x: &Element) -> String {
        match (self, x) {
            (Semigroup::FiniteGroup { group }, Element::Group(i)) if *i < group.order() => group.names[*i].clone(),
            _ => x.to_string(),
        }
    }

    /// Parse an element: `(a,b,...)` or a bare integer for vector kinds,
    /// a name for groups, `(m,n)` for the affine semigroup (rationals such
    /// as `1/2` allowed for enveloping-group elements), `[0,1]` for words.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let text = text.trim();
        let bad = || KGraphError::InvalidElement(format!("cannot read `{text}` as an element of {}", self.name()));
        let tuple = |open: char, close: char| -> Option<Vec<&str>> {
            let inner = text.strip_prefix(open)?.strip_suffix(close)?;
            if inner.trim().is_empty() {
                Some(Vec::new())
            } else {
                Some(inner.split(',').map(str::trim).collect())
            }
        };
        let x = match self {
            Semigroup::Zk { .. } | Semigroup::Nk { .. } => {
                let parts = tuple('(', ')').unwrap_or_else(|| vec![text]);
                let v = parts.iter().map(|p| p.parse::<i64>()).collect::<std::result::Result<Vec<_>, _>>();
                Element::Vector(v.map_err(|_| bad())?)
            }
            Semigroup::FiniteGroup { group } => Element::Group(group.index_of(text).ok_or_else(bad)?),
            Semigroup::AffineNN => {
                let parts = tuple('(', ')').ok_or_else(bad)?;
                if parts.len() != 2 {
                    return Err(bad());
                }
                let q = |s: &str| s.parse::<BigRational>().map_err(|_| bad());
                Element::Affine { shift: q(parts[0])?, scale: q(parts[1])? }
            }
            Semigroup::FreePlus { .. } => {
                let parts = tuple('[', ']').ok_or_else(bad)?;
                let w = parts.iter().map(|p| p.parse::<u32>()).collect::<std::result::Result<Vec<_>, _>>();
                Element::Word(w.map_err(|_| bad())?)
            }
        };
        self.check_shape(&x)?;
        Ok(x)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<String>| v.join(",");
        match self {
            Element::Vector(v) => write!(f, "({})", join(v.iter().map(|c| c.to_string()).collect())),
            Element::Group(i) => write!(f, "#{i}"),
            Element::Affine { shift, scale } => write!(f, "({shift},{scale})"),
            Element::Word(w) => write!(f, "[{}]", join(w.iter().map(|c| c.to_string()).collect())),
        }
    }
}

impl fmt::Display for Semigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn smallest_prime_not_dividing(n: &BigInt) -> u64 {
    (2u64..)
        .filter(|p| (2..*p).take_while(|d| d * d <= *p).all(|d| p % d != 0))
        .find(|p| !(n % BigInt::from(*p)).is_zero())
        .unwrap()
}

/// Is `t` strictly positive, i.e. are the powers `tⁿ` cofinal in `S`?
pub fn strictly_positive(t: &Element, s: &Semigroup, bounds: &SearchBounds) -> Result<Verdict> {
    if !s.contains(t) {
        return Err(KGraphError::InvalidElement(format!("{} is not in {}", s.format(t), s.name())));
    }
    match (s, t) {
        (Semigroup::Nk { .. }, Element::Vector(v)) => match v.iter().position(|&c| c == 0) {
            None => Ok(Verdict::holds(
                Route::Coordinatewise,
                Witness::Element { element: s.format(t), detail: "t^n = n t dominates the box [0, n t]".into() },
            )),
            Some(c) => {
                let mut e = vec![0; v.len()];
                e[c] = 1;
                Ok(Verdict::fails(
                    Route::Coordinatewise,
                    Witness::Element {
                        element: s.format(&Element::Vector(e)),
                        detail: format!("coordinate {} of every power of t is 0", c + 1),
                    },
                ))
            }
        },
        (Semigroup::Zk { .. } | Semigroup::FiniteGroup { .. }, _) => Ok(Verdict::holds(
            Route::GroupOrder,
            Witness::Element { element: s.format(t), detail: "every element dominates every other".into() },
        )),
        (Semigroup::AffineNN, Element::Affine { scale, .. }) => {
            // Powers of t have scale n^j; (0, p) needs p | n^j.
            let n = scale.to_integer();
            let p = smallest_prime_not_dividing(&n);
            Ok(Verdict::fails(
                Route::Divisibility,
                Witness::Element {
                    element: s.format(&Element::affine(0, p as i64)),
                    detail: format!("{p} divides no power of the scale {n}"),
                },
            ))
        }
        _ => Ok(Verdict::unknown(
            Route::Definition,
            bounds,
            Witness::Note { text: format!("{} has no usable preorder", s.name()) },
        )),
    }
}

/// A functor `η: Λ → S` given by edge labels; vertices map to the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functor {
    semigroup: Semigroup,
    labels: Vec<Element>,
}

/// A square on which the labels disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorViolation {
    pub square: String,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorReport {
    pub violations: Vec<FunctorViolation>,
    pub squares_checked: usize,
}

impl FunctorReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Functor {
    /// Labels indexed by edge id. Every label must lie in `S`.
    pub fn new(g: &KGraph, semigroup: Semigroup, labels: Vec<Element>) -> Result<Self> {
        if labels.len() != g.edge_count() {
            return Err(KGraphError::InvalidFunctor(format!(
                "{} labels for {} edges",
                labels.len(),
                g.edge_count()
            )));
        }
        for (e, x) in labels.iter().enumerate() {
            if !semigroup.contains(x) {
                return Err(KGraphError::InvalidFunctor(format!(
                    "label {x} of edge `{}` is not in {}",
                    g.edge_name(e),
                    semigroup.name()
                )));
            }
        }
        Ok(Functor { semigroup, labels })
    }

    /// Labels given by edge name; every edge must be labelled.
    pub fn from_names(g: &KGraph, semigroup: Semigroup, labels: &[(&str, Element)]) -> Result<Self> {
        let mut slots: Vec<Option<Element>> = vec![None; g.edge_count()];
        for (name, x) in labels {
            let e = g.edge_id(name)?;
            if slots[e].replace(x.clone()).is_some() {
                return Err(KGraphError::InvalidFunctor(format!("edge `{name}` labelled twice")));
            }
        }
        let labels = slots
            .into_iter()
            .enumerate()
            .map(|(e, x)| x.ok_or_else(|| KGraphError::InvalidFunctor(format!("edge `{}` has no label", g.edge_name(e)))))
            .collect::<Result<Vec<_>>>()?;
        Functor::new(g, semigroup, labels)
    }

    /// The degree functor into `ℕᵏ`.
    pub fn degree(g: &KGraph) -> Self {
        Self::degree_into(g, Semigroup::Nk { k: g.rank() })
    }

    /// The degree functor into `ℤᵏ`.
    pub fn degree_into_zk(g: &KGraph) -> Self {
        Self::degree_into(g, Semigroup::Zk { k: g.rank() })
    }

    fn degree_into(g: &KGraph, semigroup: Semigroup) -> Self {
        let labels = (0..g.edge_count())
            .map(|e| {
                let d = Degree::unit(g.rank(), g.edge(e).color);
                Element::Vector(d.coords().iter().map(|&c| c as i64).collect())
            })
            .collect();
        Functor { semigroup, labels }
    }

    pub fn semigroup(&self) -> &Semigroup {
        &self.semigroup
    }

    pub fn label(&self, e: EdgeId) -> &Element {
        &self.labels[e]
    }

    pub fn labels(&self) -> &[Element] {
        &self.labels
    }

    /// Label of a path given as an edge word, multiplied in word order.
    pub fn word_label(&self, word: &[EdgeId]) -> Element {
        word.iter().fold(self.semigroup.identity(), |acc, &e| {
            self.semigroup.multiply(&acc, &self.labels[e]).expect("labels validated")
        })
    }

    /// True when `η = d` into `ℤᵏ` or `ℕᵏ` with `k` the rank.
    pub fn is_degree(&self, g: &KGraph) -> bool {
        self.semigroup.vector_dim() == Some(g.rank())
            && self.labels.iter().enumerate().all(|(e, x)| {
                let c = g.edge(e).color;
                x.as_vector().is_some_and(|v| v.iter().enumerate().all(|(i, &a)| a == i64::from(i + 1 == c)))
            })
    }

    /// Vector labels as integer rows, when the target is `ℤʲ` or `ℕʲ`.
    pub fn vector_labels(&self) -> Option<Vec<Vec<i64>>> {
        self.semigroup.vector_dim()?;
        Some(self.labels.iter().map(|x| x.as_vector().unwrap().to_vec()).collect())
    }
}

fn square_name(g: &KGraph, sq: &Square) -> String {
    format!("{}{} = {}{}", g.edge_name(sq.f), g.edge_name(sq.g), g.edge_name(sq.g2), g.edge_name(sq.f2))
}

/// Check `η(f)η(g) = η(g')η(f')` on every square.
pub fn validate_functor(g: &KGraph, eta: &Functor) -> FunctorReport {
    let s = eta.semigroup();
    let mut report = FunctorReport { squares_checked: g.squares().len(), ..Default::default() };
    for sq in g.squares() {
        let left = eta.word_label(&[sq.f, sq.g]);
        let right = eta.word_label(&[sq.g2, sq.f2]);
        if left != right {
            report.violations.push(FunctorViolation {
                square: square_name(g, sq),
                left: s.format(&left),
                right: s.format(&right),
            });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn v(x: &[i64]) -> Element {
        Element::Vector(x.to_vec())
    }

    #[test]
    fn preorder_on_n2() {
        let s = Semigroup::Nk { k: 2 };
        assert!(s.geq_l(&v(&[3, 2]), &v(&[1, 2])).unwrap());
        assert!(!s.geq_l(&v(&[0, 5]), &v(&[1, 0])).unwrap());
    }

    #[test]
    fn groups_are_directed() {
        let s = Semigroup::FiniteGroup { group: FiniteGroup::symmetric3() };
        for a in 0..6 {
            for b in 0..6 {
                assert!(s.geq_l(&Element::Group(a), &Element::Group(b)).unwrap());
            }
        }
        assert!(!FiniteGroup::symmetric3().is_abelian());
    }

    #[test]
    fn affine_arithmetic() {
        let s = Semigroup::AffineNN;
        let a = Element::affine(1, 2);
        let b = Element::affine(3, 5);
        assert_eq!(s.multiply(&a, &b).unwrap(), Element::affine(8, 10));
        let d = s.difference(&a, &s.multiply(&a, &b).unwrap()).unwrap();
        assert_eq!(d, b);
        assert!(s.geq_l(&Element::affine(8, 10), &a).unwrap());
        assert!(!s.geq_l(&Element::affine(0, 3), &a).unwrap());
        let t = Element::affine(1, 6);
        let verdict = strictly_positive(&t, &s, &SearchBounds::default()).unwrap();
        assert!(verdict.is_fails());
    }

    #[test]
    fn free_monoid_has_no_preorder() {
        let s = Semigroup::FreePlus { n: 2 };
        assert!(!s.is_left_reversible());
        let w = s.parse_element("[0,1]").unwrap();
        assert!(matches!(s.geq_l(&w, &w), Err(KGraphError::UnsupportedSemigroup(_))));
    }

    #[test]
    fn strict_positivity_in_n2() {
        let s = Semigroup::Nk { k: 2 };
        let b = SearchBounds::default();
        assert!(strictly_positive(&v(&[1, 1]), &s, &b).unwrap().is_holds());
        assert!(strictly_positive(&v(&[2, 0]), &s, &b).unwrap().is_fails());
    }

    #[test]
    fn nonabelian_labels_break_squares() {
        let g = builtins::t(2).unwrap();
        let group = FiniteGroup::symmetric3();
        let (a, b) = (group.index_of("102").unwrap(), group.index_of("021").unwrap());
        let s = Semigroup::FiniteGroup { group };
        let eta = Functor::new(&g, s, vec![Element::Group(a), Element::Group(b)]).unwrap();
        assert!(!validate_functor(&g, &eta).is_valid());
    }

    #[test]
    fn parse_and_format() {
        let s = Semigroup::Nk { k: 1 };
        assert_eq!(s.parse_element("3").unwrap(), v(&[3]));
        assert_eq!(s.parse_element("(3)").unwrap(), v(&[3]));
        assert!(s.parse_element("(1,2)").is_err());
        let a = Semigroup::AffineNN.parse_element("(1/2, 3)").unwrap();
        assert_eq!(a.to_string(), "(1/2,3)");
    }
}
