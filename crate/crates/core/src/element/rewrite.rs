//! Normalization of raw words over `{v, e, e*}` by rewriting.
//!
//! This path is independent of the monomial product in the parent module:
//! it rewrites adjacent symbol pairs one rule at a time, so the order of
//! rule applications can be randomized to check confluence.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{add_term, Algebra, Element, Monomial, Terms};
use crate::error::{LpaError, Result};
use crate::field::Coeff;
use crate::graph::{EdgeRef, Graph, Path, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Vertex(VertexId),
    Edge(EdgeRef),
    Ghost(EdgeRef),
}

/// A formal linear combination of words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawExpr {
    pub terms: Vec<(Coeff, Vec<Symbol>)>,
}

impl RawExpr {
    pub fn new() -> Self {
        RawExpr::default()
    }

    pub fn push(&mut self, c: Coeff, word: Vec<Symbol>) {
        self.terms.push((c, word));
    }

    /// Symbols missing from the graph, if any.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        for (_, word) in &self.terms {
            if word.is_empty() {
                return Err(LpaError::Precondition("empty word has no value without a unit".into()));
            }
            for s in word {
                let ok = match *s {
                    Symbol::Vertex(v) => v < g.vertex_count(),
                    Symbol::Edge(e) | Symbol::Ghost(e) => g.contains(e),
                };
                if !ok {
                    return Err(LpaError::UnknownVertex(format!("{s:?}")));
                }
            }
        }
        Ok(())
    }
}

/// Result of rewriting the pair at position `i` and `i + 1`: replacement
/// words with a sign flag; an empty list means the word vanishes.
type Outcome = Vec<(bool, Vec<Symbol>)>;

fn splice(word: &[Symbol], i: usize, with: &[Symbol]) -> Vec<Symbol> {
    let mut out = Vec::with_capacity(word.len() + with.len());
    out.extend_from_slice(&word[..i]);
    out.extend_from_slice(with);
    out.extend_from_slice(&word[i + 2..]);
    out
}

fn rewrite_at(g: &Graph, word: &[Symbol], i: usize) -> Option<Outcome> {
    use Symbol::*;
    let keep = |s: Symbol| Some(vec![(false, splice(word, i, &[s]))]);
    let zero = || Some(Vec::new());
    match (word[i], word[i + 1]) {
        (Vertex(v), Vertex(w)) => if v == w { keep(Vertex(v)) } else { zero() },
        (Vertex(v), Edge(e)) => if g.source(e) == v { keep(Edge(e)) } else { zero() },
        (Vertex(v), Ghost(e)) => if g.range(e) == v { keep(Ghost(e)) } else { zero() },
        (Edge(e), Vertex(v)) => if g.range(e) == v { keep(Edge(e)) } else { zero() },
        (Ghost(e), Vertex(v)) => if g.source(e) == v { keep(Ghost(e)) } else { zero() },
        (Edge(e), Edge(f)) => (g.range(e) != g.source(f)).then(Vec::new),
        (Ghost(e), Ghost(f)) => (g.source(e) != g.range(f)).then(Vec::new),
        // CK-1
        (Ghost(e), Edge(f)) => if e == f { keep(Vertex(g.range(e))) } else { zero() },
        (Edge(e), Ghost(f)) => {
            if g.range(e) != g.range(f) {
                return zero();
            }
            let v = g.source(e);
            // CK-2, oriented at the special edge
            if e == f && g.special_edge(v) == Some(e) {
                let mut out = vec![(false, splice(word, i, &[Vertex(v)]))];
                for other in g.out_copies(v).into_iter().filter(|&o| o != e) {
                    out.push((true, splice(word, i, &[Edge(other), Ghost(other)])));
                }
                Some(out)
            } else {
                None
            }
        }
    }
}

fn reducible_positions(g: &Graph, word: &[Symbol]) -> Vec<usize> {
    (0..word.len().saturating_sub(1))
        .filter(|&i| rewrite_at(g, word, i).is_some())
        .collect()
}

/// An irreducible word is a single vertex, or edges followed by ghost edges.
fn word_to_monomial(g: &Graph, word: &[Symbol]) -> Monomial {
    if let [Symbol::Vertex(v)] = word {
        return Monomial::vertex(*v);
    }
    let split = word.iter().position(|s| matches!(s, Symbol::Ghost(_))).unwrap_or(word.len());
    let edges = |syms: &[Symbol]| -> Vec<EdgeRef> {
        syms.iter()
            .map(|s| match s {
                Symbol::Edge(e) | Symbol::Ghost(e) => *e,
                Symbol::Vertex(_) => unreachable!("vertex inside an irreducible word"),
            })
            .collect()
    };
    let a = edges(&word[..split]);
    let mut b = edges(&word[split..]);
    b.reverse();
    let alpha = Path::from_edges(g, a);
    let beta = Path::from_edges(g, b);
    match (alpha, beta) {
        (Some(alpha), Some(beta)) => Monomial { alpha, beta },
        (Some(alpha), None) => Monomial { beta: Path::vertex(alpha.end), alpha },
        (None, Some(beta)) => Monomial { alpha: Path::vertex(beta.end), beta },
        (None, None) => unreachable!("nonempty word"),
    }
}

pub(super) trait Strategy {
    fn pick(&mut self, n: usize) -> usize;
}

pub(super) struct Leftmost;

impl Strategy for Leftmost {
    fn pick(&mut self, _n: usize) -> usize {
        0
    }
}

pub(super) struct Randomized<'r, R>(pub &'r mut R);

impl<R: rand::Rng> Strategy for Randomized<'_, R> {
    fn pick(&mut self, n: usize) -> usize {
        self.0.gen_range(0..n)
    }
}

pub(super) fn normalize(alg: &Algebra<'_>, raw: &RawExpr, strategy: &mut dyn Strategy) -> Result<Element> {
    let g = alg.graph;
    let field = alg.field;
    raw.validate(g)?;
    // Equal words are merged so cancellation can happen before rewriting.
    let mut pending: BTreeMap<Vec<Symbol>, Coeff> = BTreeMap::new();
    let push = |pending: &mut BTreeMap<Vec<Symbol>, Coeff>, w: Vec<Symbol>, c: Coeff| {
        let slot = pending.entry(w).or_insert_with(Coeff::zero);
        *slot = field.add(slot, &c);
    };
    for (c, w) in &raw.terms {
        let c = field.reduce(c.clone()).ok_or_else(|| LpaError::Field(format!("{c} in {field}")))?;
        push(&mut pending, w.clone(), c);
    }
    let mut out = Terms::new();
    while !pending.is_empty() {
        let k = strategy.pick(pending.len());
        let word = pending.keys().nth(k).cloned().expect("index in range");
        let c = pending.remove(&word).expect("present");
        if c.is_zero() {
            continue;
        }
        let positions = reducible_positions(g, &word);
        if positions.is_empty() {
            add_term(field, &mut out, word_to_monomial(g, &word), c);
            continue;
        }
        let i = positions[strategy.pick(positions.len())];
        let neg = field.neg(&c);
        for (negate, w) in rewrite_at(g, &word, i).expect("reducible") {
            push(&mut pending, w, if negate { neg.clone() } else { c.clone() });
        }
    }
    Ok(alg.element(out))
}
