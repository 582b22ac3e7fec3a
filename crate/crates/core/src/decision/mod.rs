//! Deciders for graded direct-finiteness, graded Σ-V, Σ-V and bounded index
//! of nilpotence, each returning a verdict with a checkable certificate.

mod decompose;
mod spectrum;
mod witness;

use serde::{Deserialize, Serialize};

pub use decompose::{
    bounded_index, cycle_with_exit, semisimple_decomposition, socle, Anchor, Base, BoundedIndex, DecompositionDescriptor,
    SocleReport, Summand, DEFAULT_WITNESS_ORDER,
};
pub use spectrum::{classify_shape, graded_primitive_spectrum, DescriptorReport, PrimitiveQuotientDescriptor, Shape};
pub use witness::{CycleExitWitness, ElementPairWitness, MatrixUnitsWitness, TailViolation, Witness};

use crate::element::Algebra;
use crate::error::{LpaError, Result};
use crate::graph::Graph;
use crate::structure::{breaking_vertices, maximal_tails, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    DirectlyFinite,
    GradedSigmaV,
    SigmaV,
    BoundedIndex,
}

impl Property {
    pub const ALL: [Property; 4] =
        [Property::DirectlyFinite, Property::GradedSigmaV, Property::SigmaV, Property::BoundedIndex];

    pub fn name(self) -> &'static str {
        match self {
            Property::DirectlyFinite => "directly-finite",
            Property::GradedSigmaV => "graded-sigma-v",
            Property::SigmaV => "sigma-v",
            Property::BoundedIndex => "bounded-index",
        }
    }

    pub fn parse(name: &str) -> Option<Property> {
        Property::ALL.into_iter().find(|p| p.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictWithWitness {
    pub property: Property,
    pub verdict: bool,
    pub witness: Witness,
    pub evidence: Vec<String>,
}

fn cycle_exit_witness(g: &Graph) -> Option<(CycleExitWitness, String)> {
    let c = g.cycles().into_iter().find(|c| c.has_exit())?;
    let w = CycleExitWitness {
        cycle: c.edges.iter().map(|&e| g.edge_name(e)).collect(),
        exit: Some(g.edge_name(c.exits[0])),
    };
    let line = format!("cycle {} has exit {}", c.display(g), g.edge_name(c.exits[0]));
    Some((w, line))
}

/// Graded and ungraded direct-finiteness: no cycle has an exit.
pub fn decide_directly_finite(alg: &Algebra<'_>) -> Result<VerdictWithWitness> {
    let g = alg.graph();
    let elimination = g.source_elimination();
    let mut evidence = vec![format!(
        "source elimination: {} rounds, {} residual vertices, every residual vertex emits one edge: {}",
        elimination.elimination_trace.len(),
        elimination.residual.vertex_count(),
        elimination.is_graded_directly_finite
    )];
    let found = cycle_with_exit(g);
    let verdict = found.is_none();
    if verdict != elimination.is_graded_directly_finite {
        return Err(LpaError::Inconsistent("cycle exits and source elimination disagree".into()));
    }
    let witness = match found {
        None => {
            evidence.push("no cycle has an exit".into());
            Witness::None
        }
        Some((c, f)) => {
            evidence.push(format!("cycle {} has exit {}", c.display(g), g.edge_name(f)));
            let w = ElementPairWitness::from_cycle(alg, &c);
            w.verify(alg)?;
            evidence.push(format!("x = {}, y = {}: xy = {} but yx differs", w.x, w.y, w.u));
            Witness::ElementPair(w)
        }
    };
    Ok(VerdictWithWitness { property: Property::DirectlyFinite, verdict, witness, evidence })
}

/// Tail route: no cycle has an exit, and in every maximal tail `T` each
/// infinite emitter outside `B_H` sends all its edges into `H = E⁰ \ T`.
fn tail_route(g: &Graph) -> (bool, Witness, Vec<String>) {
    let mut evidence = Vec::new();
    if let Some((w, line)) = cycle_exit_witness(g) {
        evidence.push(format!("tail route: {line}"));
        return (false, Witness::CycleExit(w), evidence);
    }
    evidence.push("tail route: no cycle has an exit".into());
    for tail in maximal_tails(g) {
        let t = &tail.vertices;
        let h: VertexSet = g.vertices().filter(|v| !t.contains(v)).collect();
        let Ok(b) = breaking_vertices(g, &h) else {
            evidence.push(format!("tail route: complement of tail {:?} is not saturated", g.names(t)));
            continue;
        };
        for &u in t.iter().filter(|&&u| g.is_infinite_emitter(u) && !b.contains(&u)) {
            let into = g.out_edges(u).iter().find(|&&e| t.contains(&g.edge(e).range));
            if let Some(&e) = into {
                let w = TailViolation {
                    tail: g.names(t),
                    vertex: g.vertex_name(u).to_string(),
                    edge_into_tail: g.edge(e).id.clone(),
                };
                evidence.push(format!(
                    "tail route: infinite emitter {} in tail {:?} has edge {} into the tail",
                    w.vertex, w.tail, w.edge_into_tail
                ));
                return (false, Witness::TailViolation(w), evidence);
            }
        }
    }
    evidence.push("tail route: every infinite emitter of every maximal tail outside B_H emits into H".into());
    evidence.push(
        "tail route: the clause on infinite paths with infinitely many bifurcations is vacuous: with finitely many \
         vertices and no cycle exits such a path would revisit a vertex and leave a cycle"
            .into(),
    );
    (true, Witness::None, evidence)
}

/// Quotient route: every graded primitive quotient is a matrix ring.
fn quotient_route(g: &Graph, spectrum: &[PrimitiveQuotientDescriptor]) -> (bool, Vec<String>) {
    let mut evidence = Vec::new();
    let mut ok = true;
    for d in spectrum {
        let flag = if d.candidate { " (candidate)" } else { "" };
        evidence.push(format!(
            "quotient route: H = {:?}, S = {:?}{flag}: {}",
            g.names(&d.pair.h),
            g.names(&d.pair.s),
            d.shape.display()
        ));
        ok &= d.shape.is_matrix();
    }
    (ok, evidence)
}

pub fn decide_graded_sigma_v(g: &Graph) -> Result<VerdictWithWitness> {
    let (d, witness, mut evidence) = tail_route(g);
    let spectrum = graded_primitive_spectrum(g);
    let (c, more) = quotient_route(g, &spectrum);
    evidence.extend(more);
    if c != d {
        return Err(LpaError::Inconsistent(format!(
            "graded Σ-V routes disagree: quotient shapes say {c}, tail conditions say {d}"
        )));
    }
    Ok(VerdictWithWitness { property: Property::GradedSigmaV, verdict: d, witness, evidence })
}

pub fn decide_sigma_v(g: &Graph) -> Result<VerdictWithWitness> {
    let mut evidence = Vec::new();
    if let Some(c) = g.cycles().into_iter().next() {
        let exit = c.exits.first().map(|&f| g.edge_name(f));
        evidence.push(format!("cycle {}: not von Neumann regular, since that requires an acyclic graph", c.display(g)));
        let w = CycleExitWitness { cycle: c.edges.iter().map(|&e| g.edge_name(e)).collect(), exit };
        return Ok(VerdictWithWitness {
            property: Property::SigmaV,
            verdict: false,
            witness: Witness::CycleExit(w),
            evidence,
        });
    }
    evidence.push("acyclic, hence von Neumann regular".into());
    let spectrum = graded_primitive_spectrum(g);
    let (_, lines) = quotient_route(g, &spectrum);
    evidence.extend(lines);
    let verdict = spectrum.iter().all(|d| d.shape.is_matrix_over_k());
    let witness = if verdict {
        Witness::None
    } else {
        // acyclic with a non-matrix quotient: the tail conditions fail too
        let (_, w, lines) = tail_route(g);
        evidence.extend(lines);
        w
    };
    Ok(VerdictWithWitness { property: Property::SigmaV, verdict, witness, evidence })
}

pub fn decide_bounded_index(alg: &Algebra<'_>, order: usize) -> Result<VerdictWithWitness> {
    let b = bounded_index(alg, order)?;
    let mut evidence = Vec::new();
    let witness = match (&b.index, &b.witness) {
        (Some(n), _) => {
            evidence.push(format!("no cycle has an exit; largest summand has size {n}"));
            Witness::None
        }
        (None, Some(w)) => {
            evidence.push(format!(
                "cycle {} with exit {}: matrix units of order {} give a nilpotent of index {}",
                w.cycle.join(" "),
                w.exit,
                w.order,
                w.order
            ));
            Witness::MatrixUnits(w.clone())
        }
        (None, None) => Witness::None,
    };
    Ok(VerdictWithWitness { property: Property::BoundedIndex, verdict: b.bounded, witness, evidence })
}

pub fn decide(alg: &Algebra<'_>, property: Property, order: usize) -> Result<VerdictWithWitness> {
    match property {
        Property::DirectlyFinite => decide_directly_finite(alg),
        Property::GradedSigmaV => decide_graded_sigma_v(alg.graph()),
        Property::SigmaV => decide_sigma_v(alg.graph()),
        Property::BoundedIndex => decide_bounded_index(alg, order),
    }
}
