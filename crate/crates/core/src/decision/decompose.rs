use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::witness::MatrixUnitsWitness;
use crate::element::Algebra;
use crate::error::{LpaError, Result};
use crate::graph::{EdgeRef, Graph, Path, VertexId};
use crate::structure::hs_closure;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "ring", rename_all = "kebab-case")]
pub enum Base {
    K,
    Laurent { period: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Anchor {
    Sink(String),
    Cycle(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub base: Base,
    pub size: usize,
    pub shifts: Vec<i64>,
    pub anchor: Anchor,
}

impl Summand {
    pub fn display(&self) -> String {
        let ring = match self.base {
            Base::K => "K".to_string(),
            Base::Laurent { period: 1 } => "K[x,x^-1]".to_string(),
            Base::Laurent { period } => format!("K[x^{period},x^-{period}]"),
        };
        let shifts: Vec<String> = self.shifts.iter().map(i64::to_string).collect();
        format!("M_{}({ring})({})", self.size, shifts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionDescriptor {
    pub summands: Vec<Summand>,
}

impl DecompositionDescriptor {
    pub fn display(&self) -> String {
        if self.summands.is_empty() {
            return "0".into();
        }
        self.summands.iter().map(Summand::display).collect::<Vec<_>>().join(" + ")
    }
}

fn refuse_omega(g: &Graph) -> Result<()> {
    match g.edges().iter().find(|e| e.multiplicity.is_omega()) {
        Some(e) => Err(LpaError::Unsupported(format!(
            "ω-family {} makes {} an infinite emitter",
            e.id,
            g.vertex_name(e.source)
        ))),
        None => Ok(()),
    }
}

/// Lengths of the paths ending at `target`, never taking the edge that
/// would complete `cycle`.
fn path_lengths(g: &Graph, target: VertexId, cycle: &[EdgeRef]) -> Vec<i64> {
    let on: BTreeSet<EdgeRef> = cycle.iter().copied().collect();
    let mut out = Vec::new();
    let mut stack = vec![(target, 0i64, 0usize)];
    while let Some((v, len, used)) = stack.pop() {
        out.push(len);
        for &fam in g.in_edges(v) {
            let edge = g.edge(fam);
            let copies = match edge.multiplicity {
                crate::graph::Multiplicity::Finite(m) => m,
                crate::graph::Multiplicity::Omega => unreachable!("refused earlier"),
            };
            for copy in 0..copies {
                let e = EdgeRef::new(fam, copy);
                let used = used + usize::from(on.contains(&e));
                // a path entering a cycle without exits stays on it, so its
                // cycle edges are distinct until it has all of them
                if !on.is_empty() && used == on.len() {
                    continue;
                }
                stack.push((edge.source, len + 1, used));
            }
        }
    }
    out.sort_unstable();
    out
}

/// One matrix summand per sink and per cycle.
pub fn semisimple_decomposition(g: &Graph) -> Result<DecompositionDescriptor> {
    refuse_omega(g)?;
    let cycles = g.cycles();
    if let Some(c) = cycles.iter().find(|c| c.has_exit()) {
        return Err(LpaError::Precondition(format!(
            "cycle {} has exit {}",
            c.display(g),
            g.edge_name(c.exits[0])
        )));
    }
    let mut summands = Vec::new();
    for v in g.vertices().filter(|&v| g.is_sink(v)) {
        let shifts = path_lengths(g, v, &[]);
        summands.push(Summand {
            base: Base::K,
            size: shifts.len(),
            shifts,
            anchor: Anchor::Sink(g.vertex_name(v).to_string()),
        });
    }
    for c in &cycles {
        let shifts = path_lengths(g, c.base, &c.edges);
        summands.push(Summand {
            base: Base::Laurent { period: c.len() },
            size: shifts.len(),
            shifts,
            anchor: Anchor::Cycle(c.edges.iter().map(|&e| g.edge_name(e)).collect()),
        });
    }
    Ok(DecompositionDescriptor { summands })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedIndex {
    pub bounded: bool,
    pub index: Option<usize>,
    pub witness: Option<MatrixUnitsWitness>,
}

pub const DEFAULT_WITNESS_ORDER: usize = 4;

/// A cycle with an exit, read from the source of its first exit.
pub fn cycle_with_exit(g: &Graph) -> Option<(Path, EdgeRef)> {
    let c = g.cycles().into_iter().find(|c| c.has_exit())?;
    let f = c.exits[0];
    let edges = c.rotated_to(g, g.source(f));
    Some((Path::from_edges(g, edges).expect("cycle is a path"), f))
}

pub fn bounded_index(alg: &Algebra<'_>, order: usize) -> Result<BoundedIndex> {
    let g = alg.graph();
    refuse_omega(g)?;
    match cycle_with_exit(g) {
        Some((c, f)) => {
            if order == 0 {
                return Err(LpaError::Precondition("witness order must be positive".into()));
            }
            let w = MatrixUnitsWitness::build(alg, &c, f, order);
            w.verify(alg)?;
            Ok(BoundedIndex { bounded: false, index: None, witness: Some(w) })
        }
        None => {
            let d = semisimple_decomposition(g)?;
            let index = d.summands.iter().map(|s| s.size).max();
            Ok(BoundedIndex { bounded: true, index, witness: None })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SocleReport {
    pub generating_line_points: Vec<String>,
    pub hs_closure: Vec<String>,
    pub is_whole_algebra: bool,
}

pub fn socle(g: &Graph) -> SocleReport {
    let points = g.line_points();
    let closure = hs_closure(g, &points).expect("line points are vertices");
    SocleReport {
        generating_line_points: g.names(&points),
        hs_closure: g.names(&closure),
        is_whole_algebra: g.vertex_count() > 0 && closure.len() == g.vertex_count(),
    }
}
