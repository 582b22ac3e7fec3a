use std::collections::BTreeMap;

use super::Monomial;
use crate::error::{LpaError, Result};
use crate::graph::{Graph, Path, VertexId};

/// Every path of a finite acyclic graph without ω-families, grouped by range.
pub fn paths_by_range(g: &Graph) -> Result<BTreeMap<VertexId, Vec<Path>>> {
    if g.has_omega() {
        return Err(LpaError::Unsupported("ω-families give infinitely many paths".into()));
    }
    if !g.is_acyclic() {
        return Err(LpaError::Precondition("graph has a cycle; the algebra is infinite dimensional".into()));
    }
    let mut out: BTreeMap<VertexId, Vec<Path>> = BTreeMap::new();
    let mut stack: Vec<Path> = g.vertices().map(Path::vertex).collect();
    while let Some(p) = stack.pop() {
        for e in g.out_copies(p.end) {
            stack.push(p.extended(g, e));
        }
        out.entry(p.end).or_default().push(p);
    }
    Ok(out)
}

pub(super) fn reduced_basis(g: &Graph) -> Result<Vec<Monomial>> {
    let mut basis = Vec::new();
    for paths in paths_by_range(g)?.values() {
        for a in paths {
            for b in paths {
                let junction = match (a.edges.last(), b.edges.last()) {
                    (Some(&x), Some(&y)) => x == y && g.special_edge(g.source(x)) == Some(x),
                    _ => false,
                };
                if !junction {
                    basis.push(Monomial { alpha: a.clone(), beta: b.clone() });
                }
            }
        }
    }
    basis.sort();
    Ok(basis)
}
