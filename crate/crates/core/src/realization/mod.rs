//! Graded matrix realizations of acyclic single-sink graphs and comets.
//!
//! For an acyclic graph whose paths all end at one sink, `p_i p_j* ↦ e_ij`
//! over the paths `p_1..p_n` ending there. For a comet with cycle `c` based
//! at `w`, `p_i c^k p_j* ↦ e_ij(x^{k|c|})` over the paths ending at `w` that
//! do not contain every edge of `c`; `k < 0` stands for `(c*)^{-k}`.

mod laurent;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub use laurent::{LaurentMatrix, LaurentPoly};

use crate::corpus;
use crate::decision::{semisimple_decomposition, PrimitiveQuotientDescriptor};
use crate::element::{Algebra, Element, Monomial};
use crate::error::{LpaError, Result};
use crate::field::{Coeff, Field};
use crate::graph::{EdgeRef, Graph, Path, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RealizationKind {
    AcyclicSingleSink,
    Comet,
}

#[derive(Debug, Clone)]
pub struct RealizationMap {
    pub graph: Graph,
    pub kind: RealizationKind,
    /// The sink, or the base of the cycle.
    pub anchor: VertexId,
    pub paths: Vec<Path>,
    /// Edges of the cycle read from the anchor (comets only).
    pub cycle: Option<Vec<EdgeRef>>,
    pub shifts: Vec<i64>,
    index: BTreeMap<(VertexId, Vec<EdgeRef>), usize>,
}

fn path_order(a: &Path, b: &Path) -> std::cmp::Ordering {
    (a.len(), &a.edges, a.start).cmp(&(b.len(), &b.edges, b.start))
}

/// Paths ending at `target`; with `cycle` given, those containing every edge
/// of it are refused, and the search stops extending them.
fn paths_ending_at(g: &Graph, target: VertexId, cycle: Option<&BTreeSet<EdgeRef>>) -> Vec<Path> {
    let mut out = Vec::new();
    // edges stored last-to-first
    let mut stack: Vec<(VertexId, Vec<EdgeRef>)> = vec![(target, Vec::new())];
    while let Some((start, rev)) = stack.pop() {
        for &fam in g.in_edges(start) {
            let edge = g.edge(fam);
            let copies = match edge.multiplicity {
                crate::graph::Multiplicity::Finite(m) => m,
                crate::graph::Multiplicity::Omega => unreachable!("ω-families are refused earlier"),
            };
            for copy in 0..copies {
                let e = EdgeRef::new(fam, copy);
                let mut next = rev.clone();
                next.push(e);
                if let Some(c) = cycle {
                    if c.iter().all(|x| next.contains(x)) {
                        continue;
                    }
                }
                stack.push((edge.source, next));
            }
        }
        let mut edges = rev;
        edges.reverse();
        out.push(Path::from_edges(g, edges).unwrap_or_else(|| Path::vertex(start)));
    }
    out.sort_by(path_order);
    out
}

/// Checks that `g` is an acyclic graph draining into one sink or a comet.
fn shape(g: &Graph) -> Result<(RealizationKind, VertexId, Option<Vec<EdgeRef>>)> {
    if let Some(e) = g.edges().iter().find(|e| e.multiplicity.is_omega()) {
        return Err(LpaError::Unsupported(format!(
            "{} is an infinite emitter through the ω-family {}",
            g.vertex_name(e.source),
            e.id
        )));
    }
    if g.vertex_count() == 0 {
        return Err(LpaError::Precondition("empty graph".into()));
    }
    let cycles = g.cycles();
    if let Some(c) = cycles.iter().find(|c| c.has_exit()) {
        return Err(LpaError::Precondition(format!(
            "cycle {} has exit {}",
            c.display(g),
            g.edge_name(c.exits[0])
        )));
    }
    let reach = g.reachability();
    match cycles.as_slice() {
        [] => {
            let sinks: Vec<VertexId> = g.vertices().filter(|&v| g.is_sink(v)).collect();
            if sinks.len() > 1 {
                return Err(LpaError::Precondition(format!(
                    "second sink {} besides {}",
                    g.vertex_name(sinks[1]),
                    g.vertex_name(sinks[0])
                )));
            }
            Ok((RealizationKind::AcyclicSingleSink, sinks[0], None))
        }
        [c] => {
            if let Some(v) = g.vertices().find(|&v| !reach[v][c.base]) {
                return Err(LpaError::Precondition(format!(
                    "unreachable component: {} does not reach the cycle {}",
                    g.vertex_name(v),
                    c.display(g)
                )));
            }
            Ok((RealizationKind::Comet, c.base, Some(c.edges.clone())))
        }
        [a, b, ..] => Err(LpaError::Precondition(format!(
            "unreachable component: cycles {} and {} do not meet",
            a.display(g),
            b.display(g)
        ))),
    }
}

pub fn build_realization(g: &Graph) -> Result<RealizationMap> {
    let (kind, anchor, cycle) = shape(g)?;
    let cycle_set: Option<BTreeSet<EdgeRef>> = cycle.as_ref().map(|c| c.iter().copied().collect());
    let paths = paths_ending_at(g, anchor, cycle_set.as_ref());
    let shifts = paths.iter().map(|p| p.len() as i64).collect();
    let index = paths.iter().enumerate().map(|(i, p)| ((p.start, p.edges.clone()), i)).collect();
    Ok(RealizationMap { graph: g.clone(), kind, anchor, paths, cycle, shifts, index })
}

impl RealizationMap {
    pub fn size(&self) -> usize {
        self.paths.len()
    }

    /// `|c|` for comets, 0 for matrices over `K`.
    pub fn period(&self) -> usize {
        self.cycle.as_ref().map_or(0, Vec::len)
    }

    /// Paths from `x` that reach the anchor for the first time at their end.
    fn first_arrivals(&self, x: VertexId) -> Vec<Vec<EdgeRef>> {
        let g = &self.graph;
        let mut out = Vec::new();
        let mut stack = vec![(x, Vec::new())];
        while let Some((v, edges)) = stack.pop() {
            if v == self.anchor {
                out.push(edges);
                continue;
            }
            for e in g.out_copies(v) {
                let mut next = edges.clone();
                next.push(e);
                stack.push((g.range(e), next));
            }
        }
        out
    }

    /// Writes a path ending at the anchor as `p_i c^k`.
    fn locate(&self, start: VertexId, mut edges: Vec<EdgeRef>) -> Result<(usize, i64)> {
        let mut k = 0i64;
        if let Some(c) = &self.cycle {
            while edges.len() >= c.len() && edges[edges.len() - c.len()..] == c[..] {
                edges.truncate(edges.len() - c.len());
                k += 1;
            }
        }
        let name = || Path::from_edges(&self.graph, edges.clone()).map_or_else(
            || self.graph.vertex_name(start).to_string(),
            |p| p.display(&self.graph),
        );
        match self.index.get(&(start, edges.clone())) {
            Some(&i) => Ok((i, k)),
            None => Err(LpaError::NotExpressible(format!("path {} is not in the realization basis", name()))),
        }
    }

    /// Image of one monomial, accumulated into `out` with coefficient `c`.
    fn add_monomial(&self, field: Field, m: &Monomial, c: &Coeff, out: &mut LaurentMatrix) -> Result<()> {
        let period = self.period() as i64;
        for q in self.first_arrivals(m.alpha.end) {
            let mut p = m.alpha.edges.clone();
            p.extend_from_slice(&q);
            let mut r = m.beta.edges.clone();
            r.extend_from_slice(&q);
            let (i, k) = self.locate(m.alpha.start, p)?;
            let (j, l) = self.locate(m.beta.start, r)?;
            out.add_entry(field, i, j, (k - l) * period, c);
        }
        Ok(())
    }

    pub fn zero_matrix(&self) -> LaurentMatrix {
        LaurentMatrix::zero(self.period(), self.shifts.clone())
    }

    pub fn realize(&self, alg: &Algebra<'_>, a: &Element) -> Result<LaurentMatrix> {
        if a.graph_tag() != self.graph.fingerprint() || alg.graph().fingerprint() != self.graph.fingerprint() {
            return Err(LpaError::GraphMismatch);
        }
        let mut out = self.zero_matrix();
        for (m, c) in a.terms() {
            self.add_monomial(alg.field(), m, c, &mut out)?;
        }
        Ok(out)
    }
}

pub fn realize(m: &RealizationMap, alg: &Algebra<'_>, a: &Element) -> Result<LaurentMatrix> {
    m.realize(alg, a)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradingAudit {
    pub samples: usize,
    pub entries_checked: usize,
    pub violations: Vec<String>,
}

/// Entry `(i, j)` of the image of an element of degree `λ` must be a
/// multiple of `x^{λ + δ_j - δ_i}`.
pub fn check_grading(m: &RealizationMap, degree: i64, image: &LaurentMatrix) -> (usize, Vec<String>) {
    let mut checked = 0;
    let mut bad = Vec::new();
    for ((i, j), p) in image.entries() {
        let want = degree + m.shifts[j] - m.shifts[i];
        for (e, _) in p.terms() {
            checked += 1;
            if e != want {
                bad.push(format!("degree {degree}: entry ({}, {}) has x^{e}, expected x^{want}", i + 1, j + 1));
            }
        }
    }
    (checked, bad)
}

pub fn grading_audit<R: Rng>(m: &RealizationMap, alg: &Algebra<'_>, samples: usize, rng: &mut R) -> Result<GradingAudit> {
    let mut audit = GradingAudit { samples, entries_checked: 0, violations: Vec::new() };
    for _ in 0..samples {
        let a = corpus::random_homogeneous(alg, rng, 4, 3);
        let Some(degree) = a.degree() else { continue };
        let (n, bad) = check_grading(m, degree, &m.realize(alg, &a)?);
        audit.entries_checked += n;
        audit.violations.extend(bad);
    }
    Ok(audit)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomomorphismAudit {
    pub pairs: usize,
    pub sum_failures: usize,
    pub product_failures: usize,
    pub star_failures: usize,
}

impl HomomorphismAudit {
    pub fn passed(&self) -> bool {
        self.sum_failures + self.product_failures + self.star_failures == 0
    }
}

/// Checks additivity, multiplicativity and `realize(a*) = realize(a)*` on
/// random pairs.
pub fn homomorphism_audit<R: Rng>(m: &RealizationMap, alg: &Algebra<'_>, pairs: usize, rng: &mut R) -> Result<HomomorphismAudit> {
    let f = alg.field();
    let mut audit = HomomorphismAudit { pairs, sum_failures: 0, product_failures: 0, star_failures: 0 };
    for _ in 0..pairs {
        let a = corpus::random_element(alg, rng, 3, 3);
        let b = corpus::random_element(alg, rng, 3, 3);
        let (ra, rb) = (m.realize(alg, &a)?, m.realize(alg, &b)?);
        if m.realize(alg, &alg.add(&a, &b))? != ra.add(&rb, f) {
            audit.sum_failures += 1;
        }
        if m.realize(alg, &alg.mul(&a, &b))? != ra.mul(&rb, f) {
            audit.product_failures += 1;
        }
        if m.realize(alg, &alg.star(&a))? != ra.star() {
            audit.star_failures += 1;
        }
    }
    Ok(audit)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DimensionAudit {
    pub basis_count: usize,
    pub decomposition_sum: usize,
    pub agree: bool,
}

pub fn dimension_audit(g: &Graph) -> Result<DimensionAudit> {
    if g.has_omega() {
        return Err(LpaError::Unsupported("ω-families give an infinite dimensional algebra".into()));
    }
    if !g.is_acyclic() {
        return Err(LpaError::Precondition("graph has a cycle; the algebra is infinite dimensional".into()));
    }
    let basis_count = Algebra::new(g).reduced_basis()?.len();
    let decomposition_sum = semisimple_decomposition(g)?.summands.iter().map(|s| s.size * s.size).sum();
    Ok(DimensionAudit { basis_count, decomposition_sum, agree: basis_count == decomposition_sum })
}

/// Rank of a sparse row set by exact elimination.
pub fn rank(field: Field, rows: &[BTreeMap<usize, Coeff>]) -> usize {
    let mut pivots: BTreeMap<usize, BTreeMap<usize, Coeff>> = BTreeMap::new();
    for row in rows {
        let mut row = row.clone();
        while let Some((&col, lead)) = row.iter().next() {
            let Some(p) = pivots.get(&col) else {
                let inv = field.inv(lead).expect("nonzero lead");
                let normed = row.iter().map(|(&k, v)| (k, field.mul(v, &inv))).collect();
                pivots.insert(col, normed);
                break;
            };
            let factor = field.neg(lead);
            for (&k, v) in p {
                let slot = row.entry(k).or_insert_with(Coeff::zero);
                *slot = field.add(slot, &field.mul(&factor, v));
                if slot.is_zero() {
                    row.remove(&k);
                }
            }
        }
    }
    pivots.len()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdirectReport {
    pub basis_count: usize,
    pub quotients: usize,
    pub rank: usize,
    pub faithful: bool,
}

/// Maps the reduced basis into every listed quotient, realizes the images
/// and checks that the joint map is injective.
pub fn subdirect_faithfulness(g: &Graph, field: Field, quotients: &[PrimitiveQuotientDescriptor]) -> Result<SubdirectReport> {
    if g.has_omega() || !g.is_acyclic() {
        return Err(LpaError::Precondition("subdirect check needs a finite acyclic graph without ω-families".into()));
    }
    let alg = Algebra::with_field(g, field);
    let basis = alg.reduced_basis()?;
    let mut rows: Vec<BTreeMap<usize, Coeff>> = vec![BTreeMap::new(); basis.len()];
    let mut columns: BTreeMap<(usize, usize, usize, i64), usize> = BTreeMap::new();
    for (qi, d) in quotients.iter().enumerate() {
        let qg = &d.quotient.graph;
        let qalg = Algebra::with_field(qg, field);
        let map = build_realization(qg)?;
        for (bi, b) in basis.iter().enumerate() {
            let image = d.quotient.project(&qalg, &alg.monomial(b.clone()));
            for ((i, j), p) in map.realize(&qalg, &image)?.entries() {
                for (e, c) in p.terms() {
                    let next = columns.len();
                    let col = *columns.entry((qi, i, j, e)).or_insert(next);
                    rows[bi].insert(col, c.clone());
                }
            }
        }
    }
    let rank = rank(field, &rows);
    Ok(SubdirectReport { basis_count: basis.len(), quotients: quotients.len(), rank, faithful: rank == basis.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn g(text: &str) -> Graph {
        Graph::parse(text).unwrap()
    }

    #[test]
    fn line() {
        let line = g("u v; e: u->v");
        let m = build_realization(&line).unwrap();
        assert_eq!(m.kind, RealizationKind::AcyclicSingleSink);
        assert_eq!(m.shifts, [0, 1]);
        assert_eq!(m.paths[1].display(&line), "e");
        let alg = Algebra::new(&line);
        let e = m.realize(&alg, &alg.parse("e").unwrap()).unwrap();
        assert_eq!(e.entries().map(|(k, _)| k).collect::<Vec<_>>(), [(1, 0)]);
        assert_eq!(e.entry(1, 0), LaurentPoly::monomial(0, Coeff::one()));
        let id = m.realize(&alg, &alg.identity()).unwrap();
        assert_eq!(id, LaurentMatrix::identity(0, vec![0, 1], Field::Rational));
    }

    #[test]
    fn comet() {
        let comet = g("u v; f: u->v; c: v->v");
        let m = build_realization(&comet).unwrap();
        assert_eq!(m.kind, RealizationKind::Comet);
        assert_eq!((m.period(), m.shifts.clone()), (1, vec![0, 1]));
        let alg = Algebra::new(&comet);
        let c = m.realize(&alg, &alg.parse("c").unwrap()).unwrap();
        assert_eq!(c.entries().count(), 1);
        assert_eq!(c.entry(0, 0), LaurentPoly::monomial(1, Coeff::one()));
        let back = m.realize(&alg, &alg.parse("f c^ c^ f^").unwrap()).unwrap();
        assert_eq!(back.entry(1, 1), LaurentPoly::monomial(-2, Coeff::one()));
        assert_eq!(m.realize(&alg, &alg.identity()).unwrap(), LaurentMatrix::identity(1, vec![0, 1], Field::Rational));
    }

    #[test]
    fn longer_comet_excludes_full_cycle() {
        let comet = g("t a b; d: t->b; x: a->b; y: b->a");
        let m = build_realization(&comet).unwrap();
        let names: Vec<String> = m.paths.iter().map(|p| p.display(&comet)).collect();
        assert_eq!(m.period(), 2);
        assert_eq!(m.size(), 3, "{names:?}");
        let alg = Algebra::new(&comet);
        let audit = homomorphism_audit(&m, &alg, 40, &mut rand::thread_rng()).unwrap();
        assert!(audit.passed(), "{audit:?}");
    }

    #[test]
    fn refusals_name_the_obstruction() {
        let msg = |t: &str| build_realization(&g(t)).unwrap_err().to_string();
        assert!(msg("v; e: v->v; f: v->v").contains("has exit"));
        assert!(msg("v w1 w2; a: v->w1; b: v->w2").contains("second sink"));
        assert!(msg("v w; c: v->v").contains("unreachable component"));
        assert!(matches!(build_realization(&g("v w; e: v->w * omega")), Err(LpaError::Unsupported(_))));
    }

    #[test]
    fn dimensions() {
        let a = dimension_audit(&g("u v; e: u->v")).unwrap();
        assert_eq!((a.basis_count, a.decomposition_sum, a.agree), (4, 4, true));
        let a = dimension_audit(&g("v w1 w2 w3; a: v->w1; b: v->w2; c: v->w3")).unwrap();
        assert_eq!((a.basis_count, a.agree), (12, true));
        assert_eq!(dimension_audit(&g("v")).unwrap().basis_count, 1);
        assert!(dimension_audit(&g("v; c: v->v")).is_err());
    }

    #[test]
    fn rank_over_fields() {
        let row = |v: &[i64]| -> BTreeMap<usize, Coeff> {
            v.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, Coeff::from_integer(x.into()))).collect()
        };
        let rows = [row(&[1, 2]), row(&[2, 4]), row(&[0, 1])];
        assert_eq!(rank(Field::Rational, &rows), 2);
        let rows = [row(&[1, 1]), row(&[1, 3])];
        assert_eq!(rank(Field::Rational, &rows), 2);
        assert_eq!(rank(Field::Prime(2), &rows), 1);
    }
}
