use std::collections::BTreeSet;

use super::{Graph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexClassification {
    pub sinks: BTreeSet<VertexId>,
    pub sources: BTreeSet<VertexId>,
    pub regular: BTreeSet<VertexId>,
    pub infinite_emitters: BTreeSet<VertexId>,
    pub line_points: BTreeSet<VertexId>,
}

pub(super) fn tree(g: &Graph, v: VertexId) -> BTreeSet<VertexId> {
    g.reach_from(v)
        .into_iter()
        .enumerate()
        .filter_map(|(w, r)| r.then_some(w))
        .collect()
}

/// A vertex bifurcates when it emits two or more edge copies.
fn bifurcates(g: &Graph, v: VertexId) -> bool {
    g.emitted(v).is_none_or(|n| n >= 2)
}

pub(super) fn line_points(g: &Graph) -> BTreeSet<VertexId> {
    let on_cycle = g.on_cycle();
    let bad: Vec<bool> = g.vertices().map(|v| on_cycle[v] || bifurcates(g, v)).collect();
    g.vertices()
        .filter(|&u| {
            g.reach_from(u)
                .iter()
                .enumerate()
                .all(|(w, &r)| !r || !bad[w])
        })
        .collect()
}

pub(super) fn classify_vertices(g: &Graph) -> VertexClassification {
    let mut c = VertexClassification::default();
    for v in g.vertices() {
        if g.is_sink(v) {
            c.sinks.insert(v);
        } else if g.is_regular(v) {
            c.regular.insert(v);
        } else {
            c.infinite_emitters.insert(v);
        }
        if g.is_source(v) {
            c.sources.insert(v);
        }
    }
    c.line_points = line_points(g);
    c
}

#[derive(Debug, Clone)]
pub struct SourceElimination {
    pub is_graded_directly_finite: bool,
    pub elimination_trace: Vec<BTreeSet<VertexId>>,
    /// Remaining subgraph; vertex ids in the trace refer to the input graph.
    pub residual: Graph,
}

pub(super) fn source_elimination(g: &Graph) -> SourceElimination {
    let mut alive: BTreeSet<VertexId> = g.vertices().collect();
    let mut trace = Vec::new();
    loop {
        let sources: BTreeSet<VertexId> = alive
            .iter()
            .copied()
            .filter(|&v| g.in_edges(v).iter().all(|&e| !alive.contains(&g.edge(e).source)))
            .collect();
        if sources.is_empty() {
            break;
        }
        for v in &sources {
            alive.remove(v);
        }
        trace.push(sources);
    }
    let residual = g.induced(&alive);
    // No residual vertex is a source, so one emitted copy everywhere means the
    // residual is a disjoint union of cycles.
    let verdict = residual.vertices().all(|v| residual.emitted(v) == Some(1));
    SourceElimination { is_graded_directly_finite: verdict, elimination_trace: trace, residual }
}
