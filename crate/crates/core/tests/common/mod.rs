//! Oracles shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use lpa_core::{Algebra, EdgeRef, Element, Graph, RawExpr, Symbol, VertexId};

/// `Σ c·w` with every word multiplied out generator by generator.
pub fn evaluate(alg: &Algebra<'_>, raw: &RawExpr) -> Element {
    let mut total = alg.zero();
    for (c, word) in &raw.terms {
        let factors: Vec<Element> = word
            .iter()
            .map(|s| match *s {
                Symbol::Vertex(v) => alg.vertex(v),
                Symbol::Edge(e) => alg.edge(e),
                Symbol::Ghost(e) => alg.ghost(e),
            })
            .collect();
        let p = alg.product(&factors).unwrap_or_else(|| alg.zero());
        total = alg.add(&total, &alg.scale(&p, c));
    }
    total
}

/// Checks `ε_ij ε_kl = δ_jk ε_il` and that `N = Σ ε_{i,i+1}` has
/// nilpotency index exactly `n`.
pub fn check_matrix_units(alg: &Algebra<'_>, eps: &[Vec<Element>]) -> Result<(), String> {
    let n = eps.len();
    for i in 0..n {
        for j in 0..n {
            if eps[i][j].is_zero() {
                return Err(format!("ε_{}{} vanishes", i + 1, j + 1));
            }
            for k in 0..n {
                for l in 0..n {
                    let p = alg.mul(&eps[i][j], &eps[k][l]);
                    let want = if j == k { eps[i][l].clone() } else { alg.zero() };
                    if p != want {
                        return Err(format!("ε_{}{} ε_{}{} is wrong", i + 1, j + 1, k + 1, l + 1));
                    }
                }
            }
        }
    }
    let nil = alg.sum((0..n.saturating_sub(1)).map(|i| &eps[i][i + 1]));
    let mut power = nil.clone();
    for k in 2..=n {
        let next = alg.mul(&power, &nil);
        if k == n && !next.is_zero() {
            return Err(format!("N^{n} does not vanish"));
        }
        if k < n && next.is_zero() {
            return Err(format!("N^{k} vanishes"));
        }
        power = next;
    }
    if n >= 2 && nil.is_zero() {
        return Err("N vanishes".into());
    }
    Ok(())
}

fn paths_from(g: &Graph, v: VertexId, prefix: &mut Vec<EdgeRef>, out: &mut Vec<(VertexId, Vec<EdgeRef>)>) {
    let end = prefix.last().map_or(v, |&e| g.range(e));
    out.push((v, prefix.clone()));
    for e in g.out_copies(end) {
        prefix.push(e);
        paths_from(g, v, prefix, out);
        prefix.pop();
    }
}

/// Pairs `(α, β)` of paths with a common range, minus those where both end
/// in the first edge out of the same regular vertex. Finite acyclic graphs only.
pub fn count_reduced_monomials(g: &Graph) -> usize {
    let mut paths = Vec::new();
    for v in g.vertices() {
        paths_from(g, v, &mut Vec::new(), &mut paths);
    }
    let range = |(s, p): &(VertexId, Vec<EdgeRef>)| p.last().map_or(*s, |&e| g.range(e));
    let special = |e: EdgeRef| {
        let v = g.source(e);
        g.is_regular(v) && g.out_copies(v).first() == Some(&e)
    };
    let mut count = 0;
    for a in &paths {
        for b in &paths {
            if range(a) != range(b) {
                continue;
            }
            let excluded = matches!((a.1.last(), b.1.last()), (Some(&x), Some(&y)) if x == y && special(x));
            count += usize::from(!excluded);
        }
    }
    count
}

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn fixture_path(name: &str) -> PathBuf {
    workspace_root().join("fixtures").join(format!("{name}.graph"))
}

/// Fixtures with a byte-stable `--json analyze` report.
pub const GOLDEN: &[&str] = &["single_loop", "comet", "rose2", "clock3", "toeplitz", "rose_omega"];

pub fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("lpa").chain(args.iter().copied());
    let code = lpa_core::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

pub fn golden_report(name: &str) -> String {
    let path = fixture_path(name);
    let (code, out, err) = run_cli(&["--json", "analyze", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    out
}

/// Golden files that differ from the current output; rewrites them all
/// when `UPDATE_GOLDEN` is set.
pub fn golden_mismatches() -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut stale = Vec::new();
    for name in GOLDEN {
        let file = dir.join(format!("{name}.json"));
        let fresh = golden_report(name);
        if update {
            std::fs::write(&file, &fresh).unwrap();
            continue;
        }
        match std::fs::read_to_string(&file) {
            Ok(old) if old == fresh => {}
            _ => stale.push(name.to_string()),
        }
    }
    stale
}
