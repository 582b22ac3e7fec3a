//! Finite graph presentations.
//!
//! Vertices and edges are addressed by their declaration position. An edge of
//! multiplicity `m` stands for `m` parallel edges `e#0 .. e#(m-1)`; an edge of
//! multiplicity ω stands for infinitely many, of which any finite copy index
//! may be named.

mod classify;
mod cycles;
mod parse;

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{LpaError, ParseError, Result};

pub use classify::{SourceElimination, VertexClassification};
pub use cycles::Cycle;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Multiplicity {
    Finite(u32),
    Omega,
}

impl Multiplicity {
    pub fn is_omega(self) -> bool {
        matches!(self, Multiplicity::Omega)
    }

    /// Copy indices that are valid for this family.
    pub fn admits(self, copy: u32) -> bool {
        match self {
            Multiplicity::Finite(m) => copy < m,
            Multiplicity::Omega => true,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(m) => write!(f, "{m}"),
            Multiplicity::Omega => write!(f, "omega"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub source: VertexId,
    pub range: VertexId,
    pub multiplicity: Multiplicity,
}

/// One member `e#copy` of an edge family.
///
/// Ordered by the family's declaration position, then by copy index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub edge: EdgeId,
    pub copy: u32,
}

impl EdgeRef {
    pub fn new(edge: EdgeId, copy: u32) -> Self {
        EdgeRef { edge, copy }
    }
}

#[derive(Debug, Clone)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Validates and builds a graph; ordering follows the input vectors.
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Graph> {
        let mut vertex_index = HashMap::new();
        for (i, name) in vertices.iter().enumerate() {
            if vertex_index.insert(name.clone(), i).is_some() {
                return Err(ParseError::DuplicateVertex { line: 0, name: name.clone() }.into());
            }
        }
        let mut edge_index = HashMap::new();
        let mut omega_pairs = BTreeSet::new();
        let mut out_edges = vec![Vec::new(); vertices.len()];
        let mut in_edges = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            if e.source >= vertices.len() || e.range >= vertices.len() {
                return Err(LpaError::UnknownVertex(format!("endpoint of edge {}", e.id)));
            }
            if matches!(e.multiplicity, Multiplicity::Finite(0)) {
                return Err(ParseError::Syntax {
                    line: 0,
                    token: e.id.clone(),
                    message: "multiplicity must be positive".into(),
                }
                .into());
            }
            if edge_index.insert(e.id.clone(), i).is_some() {
                return Err(ParseError::DuplicateEdge { line: 0, name: e.id.clone() }.into());
            }
            if e.multiplicity.is_omega() && !omega_pairs.insert((e.source, e.range)) {
                return Err(ParseError::DuplicateOmega {
                    line: 0,
                    source_vertex: vertices[e.source].clone(),
                    range: vertices[e.range].clone(),
                }
                .into());
            }
            out_edges[e.source].push(i);
            in_edges[e.range].push(i);
        }
        Ok(Graph { vertices, edges, vertex_index, edge_index, out_edges, in_edges })
    }

    pub fn parse(text: &str) -> Result<Graph, ParseError> {
        parse::parse_graph(text)
    }

    /// Canonical text form, readable by [`Graph::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("vertices: {}\n", self.vertices.join(", "));
        for e in &self.edges {
            out.push_str(&format!("edge {}: {} -> {}", e.id, self.vertices[e.source], self.vertices[e.range]));
            if e.multiplicity != Multiplicity::Finite(1) {
                out.push_str(&format!(" * {}", e.multiplicity));
            }
            out.push('\n');
        }
        out
    }

    /// Stable identity used to detect elements from different graphs.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.to_text().hash(&mut h);
        h.finish()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.vertices.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn require_vertex(&self, name: &str) -> Result<VertexId> {
        self.vertex_id(name).ok_or_else(|| LpaError::UnknownVertex(name.to_string()))
    }

    pub fn names(&self, set: &BTreeSet<VertexId>) -> Vec<String> {
        let mut names: Vec<String> = set.iter().map(|&v| self.vertices[v].clone()).collect();
        names.sort();
        names
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn edge_id(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    pub fn source(&self, e: EdgeRef) -> VertexId {
        self.edges[e.edge].source
    }

    pub fn range(&self, e: EdgeRef) -> VertexId {
        self.edges[e.edge].range
    }

    /// `e` for single edges, `e#k` for members of a larger family.
    pub fn edge_name(&self, e: EdgeRef) -> String {
        let edge = &self.edges[e.edge];
        if edge.multiplicity == Multiplicity::Finite(1) {
            edge.id.clone()
        } else {
            format!("{}#{}", edge.id, e.copy)
        }
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v]
    }

    pub fn has_omega(&self) -> bool {
        self.edges.iter().any(|e| e.multiplicity.is_omega())
    }

    /// Number of emitted edge copies, `None` for an infinite emitter.
    pub fn emitted(&self, v: VertexId) -> Option<u64> {
        let mut total = 0u64;
        for &e in &self.out_edges[v] {
            match self.edges[e].multiplicity {
                Multiplicity::Finite(m) => total += m as u64,
                Multiplicity::Omega => return None,
            }
        }
        Some(total)
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.out_edges[v].is_empty()
    }

    pub fn is_regular(&self, v: VertexId) -> bool {
        matches!(self.emitted(v), Some(n) if n > 0)
    }

    pub fn is_infinite_emitter(&self, v: VertexId) -> bool {
        self.emitted(v).is_none()
    }

    pub fn is_source(&self, v: VertexId) -> bool {
        self.in_edges[v].is_empty()
    }

    /// All emitted copies of a regular vertex, in edge order.
    pub fn out_copies(&self, v: VertexId) -> Vec<EdgeRef> {
        let mut out = Vec::new();
        for &e in &self.out_edges[v] {
            if let Multiplicity::Finite(m) = self.edges[e].multiplicity {
                out.extend((0..m).map(|c| EdgeRef::new(e, c)));
            }
        }
        out
    }

    /// Copies used when walking the graph: every copy of a finite family and
    /// copy 0 as the representative of an ω-family.
    pub fn walk_copies(&self, v: VertexId) -> Vec<EdgeRef> {
        let mut out = Vec::new();
        for &e in &self.out_edges[v] {
            match self.edges[e].multiplicity {
                Multiplicity::Finite(m) => out.extend((0..m).map(|c| EdgeRef::new(e, c))),
                Multiplicity::Omega => out.push(EdgeRef::new(e, 0)),
            }
        }
        out
    }

    /// The edge singled out at a regular vertex for the CK-2 reduction: the
    /// first declared family, copy 0.
    pub fn special_edge(&self, v: VertexId) -> Option<EdgeRef> {
        if !self.is_regular(v) {
            return None;
        }
        self.out_edges[v].iter().min().map(|&e| EdgeRef::new(e, 0))
    }

    pub fn contains(&self, e: EdgeRef) -> bool {
        e.edge < self.edges.len() && self.edges[e.edge].multiplicity.admits(e.copy)
    }

    /// Direct successors of every vertex (ignoring multiplicity).
    pub fn successors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.out_edges[v].iter().map(move |&e| self.edges[e].range)
    }

    /// `reach[u][w]` iff `u >= w` (paths of length zero included).
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        self.vertices().map(|v| self.reach_from(v)).collect()
    }

    pub fn reach_from(&self, v: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![v];
        seen[v] = true;
        while let Some(u) = stack.pop() {
            for w in self.successors(u) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Vertices lying on some closed path.
    pub fn on_cycle(&self) -> Vec<bool> {
        self.vertices()
            .map(|v| self.successors(v).any(|w| self.reach_from(w)[v]))
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        !self.on_cycle().into_iter().any(|b| b)
    }

    /// True iff every pair of vertices in `set` has a common lower bound in it.
    pub fn is_downward_directed(&self, set: &BTreeSet<VertexId>, reach: &[Vec<bool>]) -> bool {
        if set.is_empty() {
            return false;
        }
        let items: Vec<_> = set.iter().copied().collect();
        items.iter().enumerate().all(|(i, &u)| {
            items[i..]
                .iter()
                .all(|&v| items.iter().any(|&w| reach[u][w] && reach[v][w]))
        })
    }

    /// Subgraph on `keep`, retaining edges with both endpoints kept.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> Graph {
        let mut map = HashMap::new();
        let mut vertices = Vec::new();
        for v in self.vertices().filter(|v| keep.contains(v)) {
            map.insert(v, vertices.len());
            vertices.push(self.vertices[v].clone());
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|e| {
                Some(Edge {
                    id: e.id.clone(),
                    source: *map.get(&e.source)?,
                    range: *map.get(&e.range)?,
                    multiplicity: e.multiplicity,
                })
            })
            .collect();
        Graph::new(vertices, edges).expect("induced subgraph of a valid graph")
    }

    pub fn tree(&self, v: VertexId) -> Result<BTreeSet<VertexId>> {
        if v >= self.vertex_count() {
            return Err(LpaError::UnknownVertex(v.to_string()));
        }
        Ok(classify::tree(self, v))
    }

    pub fn classify(&self) -> VertexClassification {
        classify::classify_vertices(self)
    }

    pub fn line_points(&self) -> BTreeSet<VertexId> {
        classify::line_points(self)
    }

    pub fn cycles(&self) -> Vec<Cycle> {
        cycles::enumerate_cycles(self)
    }

    pub fn source_elimination(&self) -> SourceElimination {
        classify::source_elimination(self)
    }
}

/// A path `e_1 ... e_n`, or a vertex when `edges` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    pub start: VertexId,
    pub end: VertexId,
    pub edges: Vec<EdgeRef>,
}

impl Path {
    pub fn vertex(v: VertexId) -> Path {
        Path { start: v, end: v, edges: Vec::new() }
    }

    pub fn from_edges(g: &Graph, edges: Vec<EdgeRef>) -> Option<Path> {
        let first = *edges.first()?;
        for pair in edges.windows(2) {
            if g.range(pair[0]) != g.source(pair[1]) {
                return None;
            }
        }
        if !edges.iter().all(|&e| g.contains(e)) {
            return None;
        }
        let end = g.range(*edges.last().unwrap());
        Some(Path { start: g.source(first), end, edges })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Appends `e`; the caller guarantees `s(e) = end`.
    pub fn push(&mut self, g: &Graph, e: EdgeRef) {
        debug_assert_eq!(g.source(e), self.end);
        self.edges.push(e);
        self.end = g.range(e);
    }

    pub fn extended(&self, g: &Graph, e: EdgeRef) -> Path {
        let mut p = self.clone();
        p.push(g, e);
        p
    }

    pub fn concat(&self, g: &Graph, tail: &[EdgeRef]) -> Path {
        let mut p = self.clone();
        for &e in tail {
            p.push(g, e);
        }
        p
    }

    /// Drops the last edge.
    pub fn pop(&mut self, g: &Graph) -> Option<EdgeRef> {
        let e = self.edges.pop()?;
        self.end = g.source(e);
        Some(e)
    }

    pub fn display(&self, g: &Graph) -> String {
        if self.edges.is_empty() {
            g.vertex_name(self.start).to_string()
        } else {
            self.edges.iter().map(|&e| g.edge_name(e)).collect::<Vec<_>>().join(" ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regularity_and_special_edges() {
        let g = Graph::parse("vertices: v, w, u\nedge f: v -> u\nedge e: v -> w * omega").unwrap();
        let v = g.vertex_id("v").unwrap();
        assert!(g.is_infinite_emitter(v));
        assert!(!g.is_regular(v));
        assert_eq!(g.special_edge(v), None);
        let h = Graph::parse("vertices: v, w\nedge b: v -> w * 2\nedge a: v -> v").unwrap();
        // declaration order, not alphabetical
        assert_eq!(h.special_edge(0), Some(EdgeRef::new(0, 0)));
        assert_eq!(h.out_copies(0).len(), 3);
        assert_eq!(h.edge_name(EdgeRef::new(0, 1)), "b#1");
        assert_eq!(h.edge_name(EdgeRef::new(1, 0)), "a");
    }

    #[test]
    fn text_round_trip() {
        let g = Graph::parse("vertices: v, w\nedge e: v -> w * omega\nedge f: v -> v * 3\nedge g: w -> v").unwrap();
        assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn paths_compose() {
        let g = Graph::parse("u v w; e: u->v; f: v->w").unwrap();
        let p = Path::from_edges(&g, vec![EdgeRef::new(0, 0), EdgeRef::new(1, 0)]).unwrap();
        assert_eq!((p.start, p.end, p.len()), (0, 2, 2));
        assert!(Path::from_edges(&g, vec![EdgeRef::new(1, 0), EdgeRef::new(0, 0)]).is_none());
        assert!(Path::from_edges(&g, vec![EdgeRef::new(0, 1)]).is_none());
    }

    #[test]
    fn downward_directedness() {
        let g = Graph::parse("v w1 w2; a: v->w1; b: v->w2").unwrap();
        let reach = g.reachability();
        let all: BTreeSet<_> = g.vertices().collect();
        assert!(!g.is_downward_directed(&all, &reach));
        assert!(g.is_downward_directed(&[0, 1].into_iter().collect(), &reach));
        assert!(!g.is_downward_directed(&BTreeSet::new(), &reach));
    }
}
