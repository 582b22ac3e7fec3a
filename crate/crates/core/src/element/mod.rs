//! Exact arithmetic in the Leavitt path algebra of a graph.
//!
//! Elements are kept in the normal form spanned by monomials `αβ*` with
//! `r(α) = r(β)`, excluding those where `α` and `β` both end in the special
//! edge of a regular vertex. Products are computed monomial by monomial
//! (absorbing `β*γ` by CK-1) and then reduced with the oriented CK-2 rule
//! `γγ* → v - Σ_{e≠γ} ee*`.

mod basis;
mod literal;
mod rewrite;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{LpaError, Result};
use crate::field::{Coeff, Field};
use crate::graph::{EdgeRef, Graph, Path, VertexId};

pub use basis::paths_by_range;
pub use rewrite::{RawExpr, Symbol};

/// `αβ*` with `r(α) = r(β)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub alpha: Path,
    pub beta: Path,
}

impl Monomial {
    pub fn vertex(v: VertexId) -> Monomial {
        Monomial { alpha: Path::vertex(v), beta: Path::vertex(v) }
    }

    pub fn degree(&self) -> i64 {
        self.alpha.len() as i64 - self.beta.len() as i64
    }

    pub fn star(&self) -> Monomial {
        Monomial { alpha: self.beta.clone(), beta: self.alpha.clone() }
    }

    pub fn is_vertex(&self) -> bool {
        self.alpha.is_empty() && self.beta.is_empty()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let total = |m: &Monomial| m.alpha.len() + m.beta.len();
        total(self)
            .cmp(&total(other))
            .then(self.alpha.len().cmp(&other.alpha.len()))
            .then_with(|| self.alpha.edges.cmp(&other.alpha.edges))
            .then_with(|| self.beta.edges.cmp(&other.beta.edges))
            .then(self.alpha.start.cmp(&other.alpha.start))
            .then(self.beta.start.cmp(&other.beta.start))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

type Terms = BTreeMap<Monomial, Coeff>;

/// A normal-form element. Zero has no terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    graph_tag: u64,
    terms: Terms,
}

impl Element {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Coeff> {
        self.terms.get(m)
    }

    /// The degree if the element is nonzero and homogeneous.
    pub fn degree(&self) -> Option<i64> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let d = degrees.next()?;
        degrees.all(|e| e == d).then_some(d)
    }

    pub fn graph_tag(&self) -> u64 {
        self.graph_tag
    }
}

/// Arithmetic context: a graph and a coefficient field.
#[derive(Debug, Clone)]
pub struct Algebra<'g> {
    graph: &'g Graph,
    field: Field,
    tag: u64,
}

impl<'g> Algebra<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Self::with_field(graph, Field::Rational)
    }

    pub fn with_field(graph: &'g Graph, field: Field) -> Self {
        Algebra { graph, field, tag: graph.fingerprint() }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn field(&self) -> Field {
        self.field
    }

    fn element(&self, terms: Terms) -> Element {
        Element { graph_tag: self.tag, terms }
    }

    fn check(&self, a: &Element) -> Result<()> {
        if a.graph_tag == self.tag {
            Ok(())
        } else {
            Err(LpaError::GraphMismatch)
        }
    }

    pub fn zero(&self) -> Element {
        self.element(Terms::new())
    }

    pub fn vertex(&self, v: VertexId) -> Element {
        self.monomial(Monomial::vertex(v))
    }

    /// Sum of the given vertices.
    pub fn vertex_sum(&self, vs: impl IntoIterator<Item = VertexId>) -> Element {
        let one = self.field.one();
        let mut terms = Terms::new();
        for v in vs {
            add_term(self.field, &mut terms, Monomial::vertex(v), one.clone());
        }
        self.element(terms)
    }

    /// The sum of all vertices, the identity of a finite graph's algebra.
    pub fn identity(&self) -> Element {
        self.vertex_sum(self.graph.vertices())
    }

    pub fn edge(&self, e: EdgeRef) -> Element {
        self.path(&Path::from_edges(self.graph, vec![e]).expect("edge of this graph"))
    }

    pub fn ghost(&self, e: EdgeRef) -> Element {
        self.star(&self.edge(e))
    }

    pub fn path(&self, p: &Path) -> Element {
        self.monomial(Monomial { alpha: p.clone(), beta: Path::vertex(p.end) })
    }

    /// `αβ*` reduced to normal form; zero when `r(α) ≠ r(β)`.
    pub fn monomial_of(&self, alpha: &Path, beta: &Path) -> Element {
        if alpha.end != beta.end {
            return self.zero();
        }
        self.monomial(Monomial { alpha: alpha.clone(), beta: beta.clone() })
    }

    pub fn monomial(&self, m: Monomial) -> Element {
        let mut terms = Terms::new();
        self.reduce_into(m, self.field.one(), &mut terms);
        self.element(terms)
    }

    /// Pushes `c·αβ*` into `out`, applying CK-2 at the junction until the
    /// monomial is in normal form.
    fn reduce_into(&self, m: Monomial, c: Coeff, out: &mut Terms) {
        let g = self.graph;
        let mut stack = vec![(m, c)];
        while let Some((Monomial { mut alpha, mut beta }, c)) = stack.pop() {
            match (alpha.edges.last(), beta.edges.last()) {
                (Some(&x), Some(&y)) if x == y && g.special_edge(g.source(x)) == Some(x) => {
                    alpha.pop(g);
                    beta.pop(g);
                    let neg = self.field.neg(&c);
                    for other in g.out_copies(alpha.end) {
                        if other != x {
                            let m = Monomial { alpha: alpha.extended(g, other), beta: beta.extended(g, other) };
                            add_term(self.field, out, m, neg.clone());
                        }
                    }
                    stack.push((Monomial { alpha, beta }, c));
                }
                _ => add_term(self.field, out, Monomial { alpha, beta }, c),
            }
        }
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        let mut terms = a.terms.clone();
        for (m, c) in &b.terms {
            add_term(self.field, &mut terms, m.clone(), c.clone());
        }
        self.element(terms)
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Element) -> Element {
        self.scale(a, &self.field.from_i64(-1))
    }

    pub fn scale(&self, a: &Element, k: &Coeff) -> Element {
        let k = self.field.reduce(k.clone()).unwrap_or_else(Coeff::zero);
        if k.is_zero() {
            return self.zero();
        }
        let terms = a
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), self.field.mul(c, &k)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        self.element(terms)
    }

    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a Element>) -> Element {
        let mut terms = Terms::new();
        for a in items {
            for (m, c) in &a.terms {
                add_term(self.field, &mut terms, m.clone(), c.clone());
            }
        }
        self.element(terms)
    }

    /// `(αβ*)(γδ*)` before reduction, or `None` when it vanishes.
    fn monomial_product(&self, m: &Monomial, n: &Monomial) -> Option<Monomial> {
        let g = self.graph;
        if m.beta.start != n.alpha.start {
            return None;
        }
        let (b, c) = (&m.beta.edges, &n.alpha.edges);
        let k = b.len().min(c.len());
        if b[..k] != c[..k] {
            return None;
        }
        Some(if b.len() <= c.len() {
            Monomial { alpha: m.alpha.concat(g, &c[k..]), beta: n.beta.clone() }
        } else {
            Monomial { alpha: m.alpha.clone(), beta: n.beta.concat(g, &b[k..]) }
        })
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let mut terms = Terms::new();
        for (m, c) in &a.terms {
            for (n, d) in &b.terms {
                if let Some(p) = self.monomial_product(m, n) {
                    self.reduce_into(p, self.field.mul(c, d), &mut terms);
                }
            }
        }
        self.element(terms)
    }

    pub fn checked_mul(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a Element>) -> Option<Element> {
        let mut it = items.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, x| self.mul(&acc, x)))
    }

    /// `a^n` for `n ≥ 1`.
    pub fn pow(&self, a: &Element, n: u32) -> Element {
        assert!(n >= 1, "no unit for the zeroth power");
        let mut acc = a.clone();
        for _ in 1..n {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// The involution `k·αβ* ↦ k·βα*`.
    pub fn star(&self, a: &Element) -> Element {
        // Reversing α and β keeps the junction condition, so no reduction.
        self.element(a.terms.iter().map(|(m, c)| (m.star(), c.clone())).collect())
    }

    pub fn homogeneous_components(&self, a: &Element) -> BTreeMap<i64, Element> {
        let mut parts: BTreeMap<i64, Terms> = BTreeMap::new();
        for (m, c) in &a.terms {
            parts.entry(m.degree()).or_default().insert(m.clone(), c.clone());
        }
        parts.into_iter().map(|(d, t)| (d, self.element(t))).collect()
    }

    /// Sum of the vertices `s(α)`, `s(β)` over the support of `a`; a
    /// homogeneous idempotent `u` with `ua = au = a`.
    pub fn local_unit(&self, a: &Element) -> Element {
        let vs: BTreeSet<VertexId> = a.terms.keys().flat_map(|m| [m.alpha.start, m.beta.start]).collect();
        self.vertex_sum(vs)
    }

    pub fn normalize(&self, raw: &RawExpr) -> Result<Element> {
        rewrite::normalize(self, raw, &mut rewrite::Leftmost)
    }

    /// Normalizes applying rewrite rules in an order drawn from `rng`.
    pub fn normalize_randomized<R: rand::Rng>(&self, raw: &RawExpr, rng: &mut R) -> Result<Element> {
        rewrite::normalize(self, raw, &mut rewrite::Randomized(rng))
    }

    /// Parses the literal syntax, e.g. `3/2 * e1 e2 e3^ e1^ - f#2 f#2^ + v`.
    pub fn parse(&self, text: &str) -> Result<Element> {
        let raw = literal::parse_raw(self, text)?;
        self.normalize(&raw)
    }

    pub fn parse_raw(&self, text: &str) -> Result<RawExpr> {
        literal::parse_raw(self, text)
    }

    /// Canonical text form; parses back to the same element.
    pub fn display(&self, a: &Element) -> String {
        literal::display(self, a)
    }

    pub fn monomial_display(&self, m: &Monomial) -> String {
        literal::word(self.graph, m)
    }

    /// Normal-form monomials spanning the algebra of a finite acyclic graph.
    pub fn reduced_basis(&self) -> Result<Vec<Monomial>> {
        basis::reduced_basis(self.graph)
    }

    /// Coefficient vector of `a` in `basis`, `None` if `a` leaves the span.
    pub fn coordinates(&self, a: &Element, basis: &[Monomial]) -> Option<Vec<Coeff>> {
        let index: BTreeMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut out = vec![Coeff::zero(); basis.len()];
        for (m, c) in &a.terms {
            out[*index.get(m)?] = c.clone();
        }
        Some(out)
    }

    /// `Σ c·m`, reduced to normal form.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, Coeff)>) -> Element {
        let mut out = Terms::new();
        for (m, c) in terms {
            self.reduce_into(m, c, &mut out);
        }
        self.element(out)
    }
}

fn add_term(field: Field, terms: &mut Terms, m: Monomial, c: Coeff) {
    use std::collections::btree_map::Entry;
    match terms.entry(m) {
        Entry::Vacant(slot) => {
            if !c.is_zero() {
                slot.insert(c);
            }
        }
        Entry::Occupied(mut slot) => {
            let s = field.add(slot.get(), &c);
            if s.is_zero() {
                slot.remove();
            } else {
                *slot.get_mut() = s;
            }
        }
    }
}
