use super::{EdgeRef, Graph, Multiplicity, VertexId};

/// A closed path through pairwise distinct vertices.
///
/// `edges` is rotated so that the smallest edge reference comes first and
/// `base` is its source. For an ω-family only copy 0 is used as the
/// representative, and at most one representative copy of each ω-family is
/// listed among the exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub edges: Vec<EdgeRef>,
    pub base: VertexId,
    pub exits: Vec<EdgeRef>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn has_exit(&self) -> bool {
        !self.exits.is_empty()
    }

    pub fn vertices(&self, g: &Graph) -> Vec<VertexId> {
        self.edges.iter().map(|&e| g.source(e)).collect()
    }

    /// The same cycle read from the vertex `v`, which must lie on it.
    pub fn rotated_to(&self, g: &Graph, v: VertexId) -> Vec<EdgeRef> {
        let k = self
            .edges
            .iter()
            .position(|&e| g.source(e) == v)
            .expect("vertex lies on the cycle");
        let mut out = self.edges[k..].to_vec();
        out.extend_from_slice(&self.edges[..k]);
        out
    }

    pub fn display(&self, g: &Graph) -> String {
        self.edges.iter().map(|&e| g.edge_name(e)).collect::<Vec<_>>().join(" ")
    }
}

fn exits_of(g: &Graph, edges: &[EdgeRef]) -> Vec<EdgeRef> {
    let mut exits = Vec::new();
    for &on in edges {
        let v = g.source(on);
        for &fam in g.out_edges(v) {
            match g.edge(fam).multiplicity {
                Multiplicity::Finite(m) => {
                    exits.extend((0..m).map(|c| EdgeRef::new(fam, c)).filter(|&f| f != on));
                }
                Multiplicity::Omega => {
                    let copy = if on.edge == fam && on.copy == 0 { 1 } else { 0 };
                    exits.push(EdgeRef::new(fam, copy));
                }
            }
        }
    }
    exits.sort();
    exits
}

/// All cycles up to rotation, sorted by their edge sequences.
pub(super) fn enumerate_cycles(g: &Graph) -> Vec<Cycle> {
    let n = g.vertex_count();
    let mut found = Vec::new();
    let mut on_path = vec![false; n];
    for start in 0..n {
        let mut path = Vec::new();
        on_path[start] = true;
        extend(g, start, start, &mut path, &mut on_path, &mut found);
        on_path[start] = false;
    }
    let mut cycles: Vec<Cycle> = found
        .into_iter()
        .map(|edges: Vec<EdgeRef>| {
            let k = (0..edges.len()).min_by_key(|&i| edges[i]).unwrap();
            let mut rotated = edges[k..].to_vec();
            rotated.extend_from_slice(&edges[..k]);
            let exits = exits_of(g, &rotated);
            Cycle { base: g.source(rotated[0]), edges: rotated, exits }
        })
        .collect();
    cycles.sort_by(|a, b| a.edges.cmp(&b.edges));
    cycles
}

// Cycles are found from their smallest vertex so each is reported once.
fn extend(
    g: &Graph,
    start: VertexId,
    at: VertexId,
    path: &mut Vec<EdgeRef>,
    on_path: &mut [bool],
    found: &mut Vec<Vec<EdgeRef>>,
) {
    for e in g.walk_copies(at) {
        let w = g.range(e);
        if w == start {
            let mut c = path.clone();
            c.push(e);
            found.push(c);
        } else if w > start && !on_path[w] {
            on_path[w] = true;
            path.push(e);
            extend(g, start, w, path, on_path, found);
            path.pop();
            on_path[w] = false;
        }
    }
}
