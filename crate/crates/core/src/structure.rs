//! Ideal-theoretic graph combinatorics: hereditary saturated sets, breaking
//! vertices, admissible pairs and their quotient graphs, maximal tails and
//! the cycle conditions.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::element::{Algebra, Element};
use crate::error::{LpaError, Result};
use crate::graph::{Edge, EdgeId, EdgeRef, Graph, Multiplicity, VertexId};

pub type VertexSet = BTreeSet<VertexId>;

pub fn is_hereditary(g: &Graph, h: &VertexSet) -> bool {
    h.iter().all(|&v| g.successors(v).all(|w| h.contains(&w)))
}

/// Regular vertices outside `h` whose edges all land in `h`.
fn unsaturated(g: &Graph, h: &VertexSet) -> Vec<VertexId> {
    g.vertices()
        .filter(|v| !h.contains(v) && g.is_regular(*v) && g.successors(*v).all(|w| h.contains(&w)))
        .collect()
}

pub fn is_hereditary_saturated(g: &Graph, h: &VertexSet) -> bool {
    is_hereditary(g, h) && unsaturated(g, h).is_empty()
}

fn check_vertices(g: &Graph, x: &VertexSet) -> Result<()> {
    match x.iter().find(|&&v| v >= g.vertex_count()) {
        Some(v) => Err(LpaError::UnknownVertex(v.to_string())),
        None => Ok(()),
    }
}

fn require_hs(g: &Graph, h: &VertexSet) -> Result<()> {
    check_vertices(g, h)?;
    if is_hereditary_saturated(g, h) {
        Ok(())
    } else {
        Err(LpaError::NotHereditarySaturated(format!("{:?}", g.names(h))))
    }
}

/// Least hereditary saturated superset of `x`.
pub fn hs_closure(g: &Graph, x: &VertexSet) -> Result<VertexSet> {
    check_vertices(g, x)?;
    let mut h = VertexSet::new();
    for &v in x {
        for (w, r) in g.reach_from(v).into_iter().enumerate() {
            if r {
                h.insert(w);
            }
        }
    }
    // A saturation step keeps the set hereditary: the added vertex's
    // successors are already inside.
    loop {
        let add = unsaturated(g, &h);
        if add.is_empty() {
            return Ok(h);
        }
        h.extend(add);
    }
}

/// Number of emitted copies of `w` landing outside `h`; `None` if infinite.
fn copies_outside(g: &Graph, w: VertexId, h: &VertexSet) -> Option<u64> {
    let mut n = 0u64;
    for &e in g.out_edges(w) {
        let edge = g.edge(e);
        if h.contains(&edge.range) {
            continue;
        }
        match edge.multiplicity {
            Multiplicity::Finite(m) => n += m as u64,
            Multiplicity::Omega => return None,
        }
    }
    Some(n)
}

/// Infinite emitters outside `h` with finitely many, but at least one, edges
/// into the complement of `h`.
pub fn breaking_vertices(g: &Graph, h: &VertexSet) -> Result<VertexSet> {
    require_hs(g, h)?;
    Ok(g.vertices()
        .filter(|w| !h.contains(w) && g.is_infinite_emitter(*w))
        .filter(|&w| matches!(copies_outside(g, w, h), Some(n) if n > 0))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AdmissiblePair {
    pub h: VertexSet,
    pub s: VertexSet,
}

impl AdmissiblePair {
    pub fn new(g: &Graph, h: VertexSet, s: VertexSet) -> Result<Self> {
        require_hs(g, &h).map_err(|e| LpaError::InvalidPair(e.to_string()))?;
        let b = breaking_vertices(g, &h)?;
        if !s.is_subset(&b) {
            return Err(LpaError::InvalidPair(format!(
                "{:?} is not contained in the breaking vertices {:?}",
                g.names(&s),
                g.names(&b)
            )));
        }
        Ok(AdmissiblePair { h, s })
    }

    pub fn trivial() -> Self {
        AdmissiblePair { h: VertexSet::new(), s: VertexSet::new() }
    }
}

/// Where a vertex or edge of a quotient graph comes from; `primed` marks the
/// added copies `v'` and `e'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Origin<T> {
    pub original: T,
    pub primed: bool,
}

#[derive(Debug, Clone)]
pub struct QuotientGraph {
    pub graph: Graph,
    pub pair: AdmissiblePair,
    pub vertex_origin: Vec<Origin<VertexId>>,
    pub edge_origin: Vec<Origin<EdgeId>>,
}

fn fresh_name(taken: &BTreeSet<String>, base: &str) -> String {
    let mut name = format!("{base}'");
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

/// The graph `E \ (H, S)`.
pub fn quotient_graph(g: &Graph, pair: &AdmissiblePair) -> Result<QuotientGraph> {
    let pair = AdmissiblePair::new(g, pair.h.clone(), pair.s.clone())?;
    let b = breaking_vertices(g, &pair.h)?;
    let unprotected: Vec<VertexId> = b.difference(&pair.s).copied().collect();

    let mut taken: BTreeSet<String> = g.vertex_names().iter().cloned().collect();
    taken.extend(g.edges().iter().map(|e| e.id.clone()));
    let mut names = Vec::new();
    let mut vertex_origin = Vec::new();
    let mut new_id = BTreeMap::new();
    let mut primed_id = BTreeMap::new();
    for v in g.vertices().filter(|v| !pair.h.contains(v)) {
        new_id.insert(v, names.len());
        names.push(g.vertex_name(v).to_string());
        vertex_origin.push(Origin { original: v, primed: false });
    }
    for &v in &unprotected {
        let name = fresh_name(&taken, g.vertex_name(v));
        taken.insert(name.clone());
        primed_id.insert(v, names.len());
        names.push(name);
        vertex_origin.push(Origin { original: v, primed: true });
    }

    let mut edges = Vec::new();
    let mut edge_origin = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        if let Some(&r) = new_id.get(&e.range) {
            edges.push(Edge { id: e.id.clone(), source: new_id[&e.source], range: r, multiplicity: e.multiplicity });
            edge_origin.push(Origin { original: i, primed: false });
        }
    }
    for (i, e) in g.edges().iter().enumerate() {
        if let Some(&r) = primed_id.get(&e.range) {
            let id = fresh_name(&taken, &e.id);
            taken.insert(id.clone());
            edges.push(Edge { id, source: new_id[&e.source], range: r, multiplicity: e.multiplicity });
            edge_origin.push(Origin { original: i, primed: true });
        }
    }
    let graph = Graph::new(names, edges)?;
    Ok(QuotientGraph { graph, pair, vertex_origin, edge_origin })
}

impl QuotientGraph {
    /// Image of `a` under `L(E) → L(E) / I(H, S) ≅ L(E \ (H, S))`.
    ///
    /// On generators: `H` and edges into `H` vanish; for `v ∈ B_H \ S` the
    /// vertex maps to `v + v'` and each edge `e` with `r(e) = v` to `e + e'`.
    pub fn project(&self, target: &Algebra<'_>, a: &Element) -> Element {
        let mut vertex_image: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for (i, o) in self.vertex_origin.iter().enumerate() {
            vertex_image.entry(o.original).or_default().push(i);
        }
        let mut edge_image: BTreeMap<EdgeId, Vec<EdgeId>> = BTreeMap::new();
        for (i, o) in self.edge_origin.iter().enumerate() {
            edge_image.entry(o.original).or_default().push(i);
        }
        let edge = |e: EdgeRef| -> Element {
            let parts: Vec<Element> = edge_image
                .get(&e.edge)
                .map(|ids| ids.iter().map(|&i| target.edge(EdgeRef::new(i, e.copy))).collect())
                .unwrap_or_default();
            target.sum(parts.iter())
        };
        let mut images = Vec::new();
        for (m, c) in a.terms() {
            let image = if m.is_vertex() {
                target.vertex_sum(vertex_image.get(&m.alpha.start).cloned().unwrap_or_default())
            } else {
                let mut factors: Vec<Element> = m.alpha.edges.iter().map(|&e| edge(e)).collect();
                factors.extend(m.beta.edges.iter().rev().map(|&e| target.star(&edge(e))));
                target.product(factors.iter()).expect("nonempty word")
            };
            images.push(target.scale(&image, c));
        }
        target.sum(images.iter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MaximalTail {
    pub vertices: VertexSet,
    /// Countably directed; automatic for finite vertex sets.
    pub special: bool,
}

/// `{u : u ≥ w}`.
pub fn upper_set(reach: &[Vec<bool>], w: VertexId) -> VertexSet {
    (0..reach.len()).filter(|&u| reach[u][w]).collect()
}

/// Every emitting vertex of `t` has an edge landing in `t`.
pub fn keeps_an_edge(g: &Graph, t: &VertexSet) -> bool {
    t.iter().all(|&u| g.is_sink(u) || g.successors(u).any(|w| t.contains(&w)))
}

/// All maximal tails.
///
/// A finite downward directed set has a vertex below all of its members, so
/// an upward closed one is `{u : u ≥ w}` for some `w`; those candidates are
/// filtered by the edge condition.
pub fn maximal_tails(g: &Graph) -> Vec<MaximalTail> {
    let reach = g.reachability();
    let tails: BTreeSet<VertexSet> = g
        .vertices()
        .map(|w| upper_set(&reach, w))
        .filter(|t| keeps_an_edge(g, t))
        .collect();
    tails.into_iter().map(|vertices| MaximalTail { vertices, special: true }).collect()
}

pub fn line_points(g: &Graph) -> VertexSet {
    g.line_points()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub acyclic: bool,
    #[serde(rename = "condition_L")]
    pub condition_l: bool,
    #[serde(rename = "condition_K")]
    pub condition_k: bool,
    pub no_exit_cycles: bool,
    #[serde(rename = "downward_directed_E0")]
    pub downward_directed_e0: bool,
    pub row_finite: bool,
    pub gk_dim_one: bool,
}

fn weight(m: Multiplicity) -> u64 {
    match m {
        Multiplicity::Finite(k) => k as u64,
        Multiplicity::Omega => 2,
    }
}

/// Whether `v` is the base of at least two distinct closed paths that do
/// not return to `v` before their end.
fn two_returns(g: &Graph, v: VertexId) -> bool {
    let n = g.vertex_count();
    // forward from v avoiding v
    let mut fwd = vec![false; n];
    let mut stack: Vec<VertexId> = g.successors(v).filter(|&w| w != v).collect();
    for &w in &stack {
        fwd[w] = true;
    }
    while let Some(x) = stack.pop() {
        for y in g.successors(x) {
            if y != v && !fwd[y] {
                fwd[y] = true;
                stack.push(y);
            }
        }
    }
    // backward to v avoiding v
    let mut bwd = vec![false; n];
    let mut stack: Vec<VertexId> = g.in_edges(v).iter().map(|&e| g.edge(e).source).filter(|&w| w != v).collect();
    for &w in &stack {
        bwd[w] = true;
    }
    while let Some(x) = stack.pop() {
        for &e in g.in_edges(x) {
            let y = g.edge(e).source;
            if y != v && !bwd[y] {
                bwd[y] = true;
                stack.push(y);
            }
        }
    }
    let region: VertexSet = (0..n).filter(|&x| fwd[x] && bwd[x]).collect();
    let sub = g.induced(&region);
    if !sub.is_acyclic() {
        return true;
    }
    // capped path counts from each region vertex back to v
    let mut count: BTreeMap<VertexId, u64> = BTreeMap::new();
    fn paths(g: &Graph, v: VertexId, x: VertexId, region: &VertexSet, count: &mut BTreeMap<VertexId, u64>) -> u64 {
        if let Some(&c) = count.get(&x) {
            return c;
        }
        let mut total = 0u64;
        for &e in g.out_edges(x) {
            let edge = g.edge(e);
            if edge.range == v {
                total += weight(edge.multiplicity);
            } else if region.contains(&edge.range) {
                total += weight(edge.multiplicity) * paths(g, v, edge.range, region, count);
            }
            total = total.min(2);
        }
        count.insert(x, total);
        total
    }
    let mut total = 0u64;
    for &e in g.out_edges(v) {
        let edge = g.edge(e);
        if edge.range == v {
            total += weight(edge.multiplicity);
        } else if region.contains(&edge.range) {
            total += weight(edge.multiplicity) * paths(g, v, edge.range, &region, &mut count);
        }
        if total >= 2 {
            return true;
        }
    }
    false
}

pub fn condition_report(g: &Graph) -> ConditionReport {
    let cycles = g.cycles();
    let on_cycle = g.on_cycle();
    let reach = g.reachability();
    let all: VertexSet = g.vertices().collect();
    let no_exit_cycles = cycles.iter().all(|c| !c.has_exit());
    ConditionReport {
        acyclic: cycles.is_empty(),
        condition_l: cycles.iter().all(|c| c.has_exit()),
        condition_k: g.vertices().filter(|&v| on_cycle[v]).all(|v| two_returns(g, v)),
        no_exit_cycles,
        downward_directed_e0: g.is_downward_directed(&all, &reach),
        row_finite: !g.has_omega(),
        gk_dim_one: !cycles.is_empty() && no_exit_cycles,
    }
}
