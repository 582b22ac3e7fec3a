use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::LpaError;
use crate::graph::Graph;
use crate::realization::{build_realization, RealizationKind};
use crate::structure::{
    breaking_vertices, is_hereditary_saturated, quotient_graph, upper_set, AdmissiblePair, QuotientGraph, VertexSet,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Shape {
    MatrixOverK { size: usize, shifts: Vec<i64> },
    MatrixOverLaurent { period: usize, size: usize, shifts: Vec<i64> },
    NotSemisimple { reason: String },
}

impl Shape {
    pub fn is_matrix(&self) -> bool {
        !matches!(self, Shape::NotSemisimple { .. })
    }

    pub fn is_matrix_over_k(&self) -> bool {
        matches!(self, Shape::MatrixOverK { .. })
    }

    pub fn display(&self) -> String {
        match self {
            Shape::MatrixOverK { size, .. } => format!("M_{size}(K)"),
            Shape::MatrixOverLaurent { period, size, .. } => match period {
                1 => format!("M_{size}(K[x,x^-1])"),
                d => format!("M_{size}(K[x^{d},x^-{d}])"),
            },
            Shape::NotSemisimple { reason } => format!("not semisimple ({reason})"),
        }
    }
}

/// Shape of `L_K(Q)` for a quotient graph `Q` with downward directed
/// vertex set.
pub fn classify_shape(q: &Graph) -> Shape {
    match build_realization(q) {
        Ok(m) => {
            let mut shifts = m.shifts.clone();
            shifts.sort_unstable();
            match m.kind {
                RealizationKind::AcyclicSingleSink => Shape::MatrixOverK { size: m.size(), shifts },
                RealizationKind::Comet => Shape::MatrixOverLaurent { period: m.period(), size: m.size(), shifts },
            }
        }
        Err(LpaError::Unsupported(reason)) | Err(LpaError::Precondition(reason)) => Shape::NotSemisimple { reason },
        Err(e) => Shape::NotSemisimple { reason: e.to_string() },
    }
}

#[derive(Debug, Clone)]
pub struct PrimitiveQuotientDescriptor {
    pub pair: AdmissiblePair,
    pub quotient: QuotientGraph,
    pub shape: Shape,
    /// `S ⊊ B_H`; such pairs are reported but not claimed to be graded
    /// primitive.
    pub candidate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptorReport {
    pub h: Vec<String>,
    pub s: Vec<String>,
    pub quotient: String,
    pub shape: Shape,
    pub candidate: bool,
}

impl PrimitiveQuotientDescriptor {
    pub fn report(&self, g: &Graph) -> DescriptorReport {
        DescriptorReport {
            h: g.names(&self.pair.h),
            s: g.names(&self.pair.s),
            quotient: self.quotient.graph.to_text(),
            shape: self.shape.clone(),
            candidate: self.candidate,
        }
    }
}

fn subsets(items: &[usize]) -> Vec<VertexSet> {
    (0u64..1 << items.len())
        .map(|mask| items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect())
        .collect()
}

/// Admissible pairs `(H, S)` whose quotient graph has a downward directed
/// vertex set, with the shape of each quotient.
///
/// Such a quotient vertex set is `T ∪ {v' : v ∈ B_H \ S}` with `T = E⁰ \ H`
/// upward closed and downward directed, hence `T = {u : u ≥ w}` for some
/// `w`; candidates for `H` are the complements of these sets.
pub fn graded_primitive_spectrum(g: &Graph) -> Vec<PrimitiveQuotientDescriptor> {
    let reach = g.reachability();
    let hs: BTreeSet<VertexSet> = g
        .vertices()
        .map(|w| g.vertices().filter(|v| !upper_set(&reach, w).contains(v)).collect::<VertexSet>())
        .filter(|h| is_hereditary_saturated(g, h))
        .collect();
    let mut out = Vec::new();
    for h in hs {
        let b = breaking_vertices(g, &h).expect("hereditary saturated");
        let b: Vec<usize> = b.into_iter().collect();
        let mut pairs = subsets(&b);
        // S = B_H first
        pairs.reverse();
        for s in pairs {
            let candidate = s.len() < b.len();
            let pair = AdmissiblePair { h: h.clone(), s };
            let quotient = quotient_graph(g, &pair).expect("admissible pair");
            let q = &quotient.graph;
            let all: VertexSet = q.vertices().collect();
            if !q.is_downward_directed(&all, &q.reachability()) {
                continue;
            }
            let shape = classify_shape(q);
            out.push(PrimitiveQuotientDescriptor { pair, quotient, shape, candidate });
        }
    }
    out
}
