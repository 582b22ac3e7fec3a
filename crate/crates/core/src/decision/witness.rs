//! Certificates attached to negative verdicts. Each one is stored as names
//! and element literals so it can be checked against the graph text alone.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::element::{Algebra, Element};
use crate::error::{LpaError, Result};
use crate::graph::{EdgeRef, Graph, Path, VertexId};
use crate::structure::{breaking_vertices, keeps_an_edge, upper_set, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    None,
    CycleExit(CycleExitWitness),
    ElementPair(ElementPairWitness),
    MatrixUnits(MatrixUnitsWitness),
    TailViolation(TailViolation),
}

impl Witness {
    pub fn is_none(&self) -> bool {
        matches!(self, Witness::None)
    }

    pub fn verify(&self, alg: &Algebra<'_>) -> Result<()> {
        match self {
            Witness::None => Ok(()),
            Witness::CycleExit(w) => w.verify(alg.graph()),
            Witness::ElementPair(w) => w.verify(alg),
            Witness::MatrixUnits(w) => w.verify(alg),
            Witness::TailViolation(w) => w.verify(alg.graph()),
        }
    }
}

fn fail(msg: impl Into<String>) -> LpaError {
    LpaError::Inconsistent(msg.into())
}

/// Resolves `e` or `e#k`.
fn edge_ref(g: &Graph, name: &str) -> Result<EdgeRef> {
    let (family, copy) = match name.split_once('#') {
        Some((f, k)) => (f, k.parse().map_err(|_| fail(format!("bad copy index in {name}")))?),
        None => (name, 0),
    };
    let id = g.edge_id(family).ok_or_else(|| fail(format!("{name} is not an edge")))?;
    if !g.edge(id).multiplicity.admits(copy) {
        return Err(fail(format!("{name} names a missing copy")));
    }
    Ok(EdgeRef::new(id, copy))
}

/// Edges forming a closed path through distinct vertices.
fn closed_path(alg: &Algebra<'_>, names: &[String]) -> Result<Path> {
    let g = alg.graph();
    let edges = names.iter().map(|n| edge_ref(g, n)).collect::<Result<Vec<_>>>()?;
    let p = Path::from_edges(g, edges).ok_or_else(|| fail("cycle edges are not composable"))?;
    let seen: BTreeSet<VertexId> = p.edges.iter().map(|&e| g.source(e)).collect();
    if p.start != p.end || seen.len() != p.len() {
        return Err(fail("edges do not form a cycle"));
    }
    Ok(p)
}

/// A cycle and, when present, an exit from it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleExitWitness {
    pub cycle: Vec<String>,
    pub exit: Option<String>,
}

impl CycleExitWitness {
    pub fn verify(&self, g: &Graph) -> Result<()> {
        let alg = Algebra::new(g);
        let c = closed_path(&alg, &self.cycle)?;
        if let Some(f) = &self.exit {
            let f = edge_ref(g, f)?;
            let on: BTreeSet<VertexId> = c.edges.iter().map(|&e| g.source(e)).collect();
            if !on.contains(&g.source(f)) || c.edges.contains(&f) {
                return Err(fail("exit does not leave the cycle"));
            }
        }
        Ok(())
    }
}

/// Homogeneous `x`, `y` and a vertex sum `u` with `xy = u ≠ yx`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementPairWitness {
    pub x: String,
    pub y: String,
    pub u: String,
}

impl ElementPairWitness {
    /// `x = c*`, `y = c`, `u = s(c)`.
    pub fn from_cycle(alg: &Algebra<'_>, cycle: &Path) -> Self {
        let y = alg.path(cycle);
        let x = alg.star(&y);
        let u = alg.vertex(cycle.start);
        ElementPairWitness { x: alg.display(&x), y: alg.display(&y), u: alg.display(&u) }
    }

    pub fn verify(&self, alg: &Algebra<'_>) -> Result<()> {
        let (x, y, u) = (alg.parse(&self.x)?, alg.parse(&self.y)?, alg.parse(&self.u)?);
        if x.degree().is_none() || y.degree().is_none() {
            return Err(fail("x and y must be homogeneous"));
        }
        if u.is_zero() || !u.terms().all(|(m, c)| m.is_vertex() && *c == alg.field().one()) {
            return Err(fail("u must be a nonzero sum of distinct vertices"));
        }
        let ok = |a: &Element, b: &Element| alg.mul(a, b);
        if ok(&u, &x) != x || ok(&x, &u) != x || ok(&u, &y) != y || ok(&y, &u) != y {
            return Err(fail("u is not a unit for x and y"));
        }
        if alg.mul(&x, &y) != u {
            return Err(fail("xy differs from u"));
        }
        if alg.mul(&y, &x) == u {
            return Err(fail("yx equals u"));
        }
        Ok(())
    }
}

/// `ε_ij = c^i f f* (c*)^j` for `1 ≤ i, j ≤ n`, with `c` read from `s(f)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixUnitsWitness {
    pub cycle: Vec<String>,
    pub exit: String,
    pub order: usize,
    /// `units[i-1][j-1] = ε_ij`.
    pub units: Vec<Vec<String>>,
}

fn units(alg: &Algebra<'_>, c: &Path, f: EdgeRef, n: usize) -> Vec<Vec<Element>> {
    let c = alg.path(c);
    let cs = alg.star(&c);
    let ff = alg.mul(&alg.edge(f), &alg.ghost(f));
    let mut left = vec![c.clone()];
    let mut right = vec![cs.clone()];
    for i in 1..n {
        left.push(alg.mul(&left[i - 1], &c));
        right.push(alg.mul(&right[i - 1], &cs));
    }
    (0..n)
        .map(|i| (0..n).map(|j| alg.mul(&alg.mul(&left[i], &ff), &right[j])).collect())
        .collect()
}

impl MatrixUnitsWitness {
    pub fn build(alg: &Algebra<'_>, cycle: &Path, exit: EdgeRef, order: usize) -> Self {
        let g = alg.graph();
        MatrixUnitsWitness {
            cycle: cycle.edges.iter().map(|&e| g.edge_name(e)).collect(),
            exit: g.edge_name(exit),
            order,
            units: units(alg, cycle, exit, order)
                .iter()
                .map(|row| row.iter().map(|u| alg.display(u)).collect())
                .collect(),
        }
    }

    pub fn verify(&self, alg: &Algebra<'_>) -> Result<()> {
        let n = self.order;
        if n == 0 {
            return Err(fail("order must be positive"));
        }
        let c = closed_path(alg, &self.cycle)?;
        let f = edge_ref(alg.graph(), &self.exit)?;
        if alg.graph().source(f) != c.start || c.edges[0] == f {
            return Err(fail("exit must leave the cycle at its first vertex"));
        }
        let e = units(alg, &c, f, n);
        if self.units.len() != n || self.units.iter().any(|r| r.len() != n) {
            return Err(fail("unit table has the wrong shape"));
        }
        for (i, row) in self.units.iter().enumerate() {
            for (j, text) in row.iter().enumerate() {
                if alg.parse(text)? != e[i][j] {
                    return Err(fail(format!("unit ({}, {}) differs from c^i f f* (c*)^j", i + 1, j + 1)));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let want = if j == k { e[i][l].clone() } else { alg.zero() };
                        if alg.mul(&e[i][j], &e[k][l]) != want {
                            return Err(fail(format!(
                                "unit relation fails for ({},{}) ({},{})",
                                i + 1,
                                j + 1,
                                k + 1,
                                l + 1
                            )));
                        }
                    }
                }
            }
        }
        let nil = alg.sum((0..n - 1).map(|i| &e[i][i + 1]));
        if n > 1 {
            if alg.pow(&nil, n as u32 - 1).is_zero() {
                return Err(fail("nilpotent has index below the order"));
            }
            if !alg.pow(&nil, n as u32).is_zero() {
                return Err(fail("nilpotent does not vanish at the order"));
            }
        }
        Ok(())
    }
}

/// A maximal tail `T` and an infinite emitter `u ∈ T \ B_H` (with
/// `H = E⁰ \ T`) that has an edge landing in `T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailViolation {
    pub tail: Vec<String>,
    pub vertex: String,
    pub edge_into_tail: String,
}

impl TailViolation {
    pub fn verify(&self, g: &Graph) -> Result<()> {
        let t: VertexSet = self.tail.iter().map(|n| g.require_vertex(n)).collect::<Result<_>>()?;
        let reach = g.reachability();
        // a downward directed upward closed finite set is {x : x ≥ w} for some w
        if !t.iter().any(|&w| upper_set(&reach, w) == t) || !keeps_an_edge(g, &t) {
            return Err(fail("not a maximal tail"));
        }
        let u = g.require_vertex(&self.vertex)?;
        let h: VertexSet = g.vertices().filter(|v| !t.contains(v)).collect();
        if !t.contains(&u) || !g.is_infinite_emitter(u) || breaking_vertices(g, &h)?.contains(&u) {
            return Err(fail("vertex is not an infinite emitter of T outside B_H"));
        }
        let e = edge_ref(g, &self.edge_into_tail)?;
        if g.source(e) != u || !t.contains(&g.range(e)) {
            return Err(fail("edge does not go from the vertex into the tail"));
        }
        Ok(())
    }
}
