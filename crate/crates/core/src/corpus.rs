//! Named fixture graphs and seeded random generators for graphs and
//! elements.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decision::{
    decide_bounded_index, decide_directly_finite, decide_graded_sigma_v, decide_sigma_v, semisimple_decomposition,
    VerdictWithWitness,
};
use crate::error::Result;
use crate::parallel::{self, Mode};

use crate::element::{Algebra, Element, Monomial, RawExpr, Symbol};
use crate::field::Coeff;
use crate::graph::{Edge, EdgeRef, Graph, Multiplicity, Path, VertexId};

/// Name and text of every built-in fixture.
pub const FIXTURES: &[(&str, &str)] = &[
    ("single_loop", "vertices: v\nedge c: v -> v\n"),
    ("comet", "vertices: u v\nedge f: u -> v\nedge c: v -> v\n"),
    ("rose2", "vertices: v\nedge e: v -> v\nedge f: v -> v\n"),
    ("toeplitz", "vertices: v w\nedge c: v -> v\nedge f: v -> w\n"),
    ("clock3", "vertices: v w1 w2 w3\nedge a: v -> w1\nedge b: v -> w2\nedge c: v -> w3\n"),
    ("ladder2x2", "vertices: u1 u2 v1 v2\nedge a: u1 -> u2\nedge b: v1 -> v2\nedge c: v1 -> u1\nedge d: v2 -> u2\n"),
    ("rose_omega", "vertices: v w u\nedge e: v -> w * omega\nedge f: v -> u\n"),
    ("line", "vertices: u v\nedge e: u -> v\n"),
    ("isolated", "vertices: v\n"),
];

pub fn fixture(name: &str) -> Option<Graph> {
    FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| Graph::parse(text).expect("fixture parses"))
}

pub fn fixtures() -> Vec<(&'static str, Graph)> {
    FIXTURES.iter().map(|(n, t)| (*n, Graph::parse(t).expect("fixture parses"))).collect()
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

fn build(n: usize, arcs: Vec<(VertexId, VertexId, Multiplicity)>) -> Graph {
    let edges = arcs
        .into_iter()
        .enumerate()
        .map(|(i, (source, range, multiplicity))| Edge { id: format!("e{i}"), source, range, multiplicity })
        .collect();
    Graph::new(names(n), edges).expect("generated graph is valid")
}

/// A random graph on at most `max_vertices` vertices with at most
/// `max_edges` edges of finite families; with `omega`, ω-families are added
/// on top, about one per eight finite families.
pub fn random_graph<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize, omega: bool) -> Graph {
    let n = rng.gen_range(1..=max_vertices);
    let m = rng.gen_range(0..=max_edges);
    let mut arcs = Vec::new();
    let mut omega_pairs = std::collections::BTreeSet::new();
    // finite edges, counted with multiplicity
    let mut budget = m;
    while budget > 0 {
        let (s, r) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let mult = if omega && rng.gen_ratio(1, 8) && omega_pairs.insert((s, r)) {
            Multiplicity::Omega
        } else if budget >= 2 && rng.gen_ratio(1, 6) {
            budget -= 2;
            Multiplicity::Finite(2)
        } else {
            budget -= 1;
            Multiplicity::Finite(1)
        };
        arcs.push((s, r, mult));
    }
    build(n, arcs)
}

/// Acyclic graph in which every vertex reaches the single sink `v{n-1}`.
pub fn random_single_sink<R: Rng>(rng: &mut R, max_vertices: usize) -> Graph {
    let n = rng.gen_range(1..=max_vertices);
    let mut arcs = Vec::new();
    for v in 0..n.saturating_sub(1) {
        // one edge forward guarantees a path to the sink
        arcs.push((v, rng.gen_range(v + 1..n), Multiplicity::Finite(1)));
        for _ in 0..rng.gen_range(0..2) {
            arcs.push((v, rng.gen_range(v + 1..n), Multiplicity::Finite(rng.gen_range(1..=2))));
        }
    }
    arcs.shuffle(rng);
    build(n, arcs)
}

/// A cycle without exits and an acyclic tail draining into it.
pub fn random_comet<R: Rng>(rng: &mut R, max_vertices: usize) -> Graph {
    let k = rng.gen_range(1..=3.min(max_vertices));
    let n = rng.gen_range(k..=max_vertices.max(k));
    let tail = n - k;
    let mut arcs = Vec::new();
    for i in 0..k {
        arcs.push((tail + i, tail + (i + 1) % k, Multiplicity::Finite(1)));
    }
    for v in 0..tail {
        arcs.push((v, rng.gen_range(v + 1..n), Multiplicity::Finite(1)));
        if rng.gen_bool(0.4) {
            arcs.push((v, rng.gen_range(v + 1..n), Multiplicity::Finite(rng.gen_range(1..=2))));
        }
    }
    arcs.shuffle(rng);
    build(n, arcs)
}

fn copy_of<R: Rng>(g: &Graph, fam: usize, rng: &mut R) -> EdgeRef {
    let copy = match g.edge(fam).multiplicity {
        Multiplicity::Finite(m) => rng.gen_range(0..m),
        Multiplicity::Omega => rng.gen_range(0..3),
    };
    EdgeRef::new(fam, copy)
}

/// Random walk of length at most `max_len` backwards from `end`.
fn random_path_into<R: Rng>(g: &Graph, end: VertexId, max_len: usize, rng: &mut R) -> Path {
    let len = rng.gen_range(0..=max_len);
    let mut rev = Vec::new();
    let mut at = end;
    for _ in 0..len {
        let Some(&fam) = g.in_edges(at).choose(rng) else { break };
        let e = copy_of(g, fam, rng);
        rev.push(e);
        at = g.source(e);
    }
    rev.reverse();
    Path::from_edges(g, rev).unwrap_or_else(|| Path::vertex(end))
}

/// A monomial `αβ*` with `r(α) = r(β)`, not necessarily in normal form.
pub fn random_monomial<R: Rng>(g: &Graph, rng: &mut R, max_len: usize) -> Monomial {
    let x = rng.gen_range(0..g.vertex_count());
    Monomial { alpha: random_path_into(g, x, max_len, rng), beta: random_path_into(g, x, max_len, rng) }
}

fn random_coeff<R: Rng>(alg: &Algebra<'_>, rng: &mut R) -> Coeff {
    let mut k = 0;
    while k == 0 {
        k = rng.gen_range(-3..=3);
    }
    alg.field().from_i64(k)
}

pub fn random_element<R: Rng>(alg: &Algebra<'_>, rng: &mut R, terms: usize, max_len: usize) -> Element {
    let g = alg.graph();
    let n = rng.gen_range(1..=terms);
    alg.from_terms((0..n).map(|_| (random_monomial(g, rng, max_len), random_coeff(alg, rng))))
}

/// A homogeneous element: monomials are drawn until `terms` of them share
/// the degree of the first, or the attempts run out.
pub fn random_homogeneous<R: Rng>(alg: &Algebra<'_>, rng: &mut R, terms: usize, max_len: usize) -> Element {
    let g = alg.graph();
    let first = random_monomial(g, rng, max_len);
    let degree = first.degree();
    let mut chosen = vec![(first, random_coeff(alg, rng))];
    for _ in 0..terms * 8 {
        if chosen.len() >= terms {
            break;
        }
        let m = random_monomial(g, rng, max_len);
        if m.degree() == degree {
            chosen.push((m, random_coeff(alg, rng)));
        }
    }
    alg.from_terms(chosen)
}

/// A random word over vertices, edges and ghost edges, composable or not.
pub fn random_raw<R: Rng>(alg: &Algebra<'_>, rng: &mut R, terms: usize, max_word: usize) -> RawExpr {
    let g = alg.graph();
    let mut raw = RawExpr::new();
    for _ in 0..rng.gen_range(1..=terms) {
        let len = rng.gen_range(1..=max_word);
        let word = (0..len)
            .map(|_| {
                if g.edge_count() == 0 || rng.gen_ratio(1, 5) {
                    return Symbol::Vertex(rng.gen_range(0..g.vertex_count()));
                }
                let e = copy_of(g, rng.gen_range(0..g.edge_count()), rng);
                if rng.gen_bool(0.5) {
                    Symbol::Edge(e)
                } else {
                    Symbol::Ghost(e)
                }
            })
            .collect();
        raw.push(random_coeff(alg, rng), word);
    }
    raw
}

/// A word that follows the graph: a path, then a ghost path back, with
/// random insertions of `e* e` pairs and vertices. Such words rarely vanish.
pub fn random_walk_raw<R: Rng>(alg: &Algebra<'_>, rng: &mut R, terms: usize, max_len: usize) -> RawExpr {
    let g = alg.graph();
    let mut raw = RawExpr::new();
    for _ in 0..rng.gen_range(1..=terms) {
        let m = random_monomial(g, rng, max_len);
        let mut word = vec![Symbol::Vertex(m.alpha.start)];
        for &e in &m.alpha.edges {
            word.push(Symbol::Edge(e));
            if rng.gen_ratio(1, 3) {
                // e* e = r(e)
                word.push(Symbol::Ghost(e));
                word.push(Symbol::Edge(e));
            }
        }
        for &e in m.beta.edges.iter().rev() {
            word.push(Symbol::Ghost(e));
        }
        if rng.gen_ratio(1, 3) {
            word.push(Symbol::Vertex(m.beta.start));
        }
        raw.push(random_coeff(alg, rng), word);
    }
    raw
}

/// Outcome of every decider on one graph, with the cross-checks between
/// them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphAudit {
    pub graph: String,
    pub directly_finite: Option<bool>,
    pub graded_sigma_v: Option<bool>,
    pub sigma_v: Option<bool>,
    /// `None` for graphs with ω-families, where the statement does not apply.
    pub bounded_index: Option<bool>,
    pub decomposes: Option<bool>,
    pub errors: Vec<String>,
    pub witness_failures: Vec<String>,
}

impl GraphAudit {
    /// Direct-finiteness, graded Σ-V, bounded index and decomposability agree.
    /// Vacuous for graphs with ω-families.
    pub fn four_way_agrees(&self) -> bool {
        match (self.directly_finite, self.graded_sigma_v, self.bounded_index, self.decomposes) {
            (Some(a), Some(b), Some(c), Some(d)) => a == b && b == c && c == d,
            (_, _, None, None) => true,
            _ => false,
        }
    }

    pub fn sigma_v_implies_graded(&self) -> bool {
        !(self.sigma_v == Some(true) && self.graded_sigma_v == Some(false))
    }

    pub fn clean(&self) -> bool {
        self.errors.is_empty() && self.witness_failures.is_empty() && self.four_way_agrees() && self.sigma_v_implies_graded()
    }
}

pub fn audit_graph(g: &Graph, order: usize) -> GraphAudit {
    let alg = Algebra::new(g);
    let mut audit = GraphAudit {
        graph: g.to_text(),
        directly_finite: None,
        graded_sigma_v: None,
        sigma_v: None,
        bounded_index: None,
        decomposes: None,
        errors: Vec::new(),
        witness_failures: Vec::new(),
    };
    let mut record = |name: &str, r: Result<VerdictWithWitness>, errors: &mut Vec<String>| -> Option<bool> {
        match r {
            Ok(v) => {
                if let Err(e) = v.witness.verify(&alg) {
                    audit.witness_failures.push(format!("{name}: {e}"));
                }
                Some(v.verdict)
            }
            Err(e) => {
                errors.push(format!("{name}: {e}"));
                None
            }
        }
    };
    let mut errors = Vec::new();
    let df = record("directly-finite", decide_directly_finite(&alg), &mut errors);
    let gs = record("graded-sigma-v", decide_graded_sigma_v(g), &mut errors);
    let sv = record("sigma-v", decide_sigma_v(g), &mut errors);
    let bi = if g.has_omega() { None } else { record("bounded-index", decide_bounded_index(&alg, order), &mut errors) };
    audit.directly_finite = df;
    audit.graded_sigma_v = gs;
    audit.sigma_v = sv;
    audit.bounded_index = bi;
    if !g.has_omega() {
        audit.decomposes = Some(semisimple_decomposition(g).is_ok());
    }
    if g.is_acyclic() && df == Some(false) {
        errors.push("acyclic graph judged not directly finite".into());
    }
    audit.errors = errors;
    audit
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub seed: u64,
    pub graphs: usize,
    pub with_omega: usize,
    pub four_way_disagreements: usize,
    pub route_disagreements: usize,
    pub sigma_v_implication_failures: usize,
    pub witness_failures: usize,
    pub errors: usize,
    pub failures: Vec<GraphAudit>,
}

/// The `i`-th graph of the corpus for `seed`; independent of evaluation
/// order.
pub fn corpus_graph(seed: u64, i: usize, omega: bool) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    random_graph(&mut rng, 7, 14, omega)
}

pub fn run_corpus(count: usize, seed: u64, omega: bool, order: usize, mode: Mode) -> CorpusReport {
    let audits = parallel::map_range(mode, count, |i| {
        let g = corpus_graph(seed, i, omega);
        (g.has_omega(), audit_graph(&g, order))
    });
    let mut report = CorpusReport {
        seed,
        graphs: count,
        with_omega: 0,
        four_way_disagreements: 0,
        route_disagreements: 0,
        sigma_v_implication_failures: 0,
        witness_failures: 0,
        errors: 0,
        failures: Vec::new(),
    };
    for (has_omega, a) in audits {
        report.with_omega += usize::from(has_omega);
        report.four_way_disagreements += usize::from(!a.four_way_agrees());
        report.route_disagreements += usize::from(a.errors.iter().any(|e| e.contains("routes disagree")));
        report.sigma_v_implication_failures += usize::from(!a.sigma_v_implies_graded());
        report.witness_failures += a.witness_failures.len();
        report.errors += a.errors.len();
        if !a.clean() {
            report.failures.push(a);
        }
    }
    report
}
