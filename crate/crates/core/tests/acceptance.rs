//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness; exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use lpa_core::corpus::{self, run_corpus};
use lpa_core::decision::{
    cycle_with_exit, decide, graded_primitive_spectrum, semisimple_decomposition, ElementPairWitness,
    MatrixUnitsWitness, Property, Shape,
};
use lpa_core::parallel::Mode;
use lpa_core::realization::{build_realization, dimension_audit, grading_audit, homomorphism_audit, subdirect_faithfulness};
use lpa_core::{Algebra, Element, Field, Graph, RawExpr, Symbol};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240611;
const RAW_EXPRESSIONS: usize = 1200;
const RULE_ORDERS: usize = 4;
const CORPUS_SIZE: usize = 500;
const WITNESS_ORDER: usize = 4;
const SINGLE_SINK_GRAPHS: usize = 50;
const COMETS: usize = 20;
const PAIRS: usize = 200;
const GRADING_SAMPLES: usize = 200;

const LIMIT_REWRITING: Duration = Duration::from_secs(30);
const LIMIT_EQUIVALENCES: Duration = Duration::from_secs(120);
const LIMIT_WITNESSES: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;
type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    match (out, limit) {
        (Ok(msg), Some(l)) if elapsed > l => Err(format!("{msg}; took {elapsed:.1?}, limit {l:?}")),
        (Ok(msg), _) => Ok(format!("{msg}; {elapsed:.1?}")),
        (Err(e), _) => Err(e),
    }
}

fn word(alg: &Algebra<'_>, syms: Vec<Symbol>) -> RawExpr {
    let mut raw = RawExpr::new();
    raw.push(alg.field().one(), syms);
    raw
}

fn relations_vanish(alg: &Algebra<'_>) -> Result<usize, String> {
    let g = alg.graph();
    let mut checked = 0;
    let copies: Vec<_> = g.vertices().flat_map(|v| g.out_copies(v)).collect();
    for &e in &copies {
        // e* e - r(e)
        let mut raw = word(alg, vec![Symbol::Ghost(e), Symbol::Edge(e)]);
        raw.push(alg.field().neg(&alg.field().one()), vec![Symbol::Vertex(g.range(e))]);
        let n = alg.normalize(&raw).map_err(|x| x.to_string())?;
        if !n.is_zero() {
            return Err(format!("e* e - r(e) for {} gives {}", g.edge_name(e), alg.display(&n)));
        }
        for &f in &copies {
            if f != e {
                let n = alg.normalize(&word(alg, vec![Symbol::Ghost(e), Symbol::Edge(f)])).map_err(|x| x.to_string())?;
                if !n.is_zero() {
                    return Err(format!("e* f for {} {} gives {}", g.edge_name(e), g.edge_name(f), alg.display(&n)));
                }
            }
            checked += 1;
        }
    }
    for v in g.vertices().filter(|&v| g.is_regular(v)) {
        let mut raw = word(alg, vec![Symbol::Vertex(v)]);
        for e in g.out_copies(v) {
            raw.push(alg.field().neg(&alg.field().one()), vec![Symbol::Edge(e), Symbol::Ghost(e)]);
        }
        let n = alg.normalize(&raw).map_err(|x| x.to_string())?;
        if !n.is_zero() {
            return Err(format!("v - Σ ee* at {} gives {}", g.vertex_name(v), alg.display(&n)));
        }
        checked += 1;
    }
    Ok(checked)
}

/// Normal forms agree across rule orders, and match the product of the
/// generators computed in the algebra.
fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let fixtures = corpus::fixtures();
    let mut expressions = 0;
    let mut relations = 0;
    for (name, g) in &fixtures {
        let alg = Algebra::new(g);
        relations += relations_vanish(&alg).map_err(|e| format!("{name}: {e}"))?;
    }
    let per_fixture = RAW_EXPRESSIONS.div_ceil(fixtures.len());
    for (name, g) in &fixtures {
        let alg = Algebra::new(g);
        for k in 0..per_fixture {
            let raw = if k % 2 == 0 {
                corpus::random_raw(&alg, &mut rng, 3, 6)
            } else {
                corpus::random_walk_raw(&alg, &mut rng, 3, 3)
            };
            let reference = alg.normalize(&raw).map_err(|e| format!("{name}: {e}"))?;
            for _ in 0..RULE_ORDERS {
                let other = alg.normalize_randomized(&raw, &mut rng).map_err(|e| format!("{name}: {e}"))?;
                if other != reference {
                    return Err(format!("{name}: rule orders disagree on {raw:?}"));
                }
            }
            let oracle = common::evaluate(&alg, &raw);
            if oracle != reference {
                return Err(format!("{name}: generator product differs on {raw:?}"));
            }
            expressions += 1;
        }
    }
    Ok(format!("{expressions} expressions, {RULE_ORDERS} random rule orders each, {relations} relations vanish"))
}

fn criterion_2() -> Outcome {
    let r = run_corpus(CORPUS_SIZE, SEED, false, WITNESS_ORDER, Mode::Parallel);
    if r.graphs < CORPUS_SIZE || r.with_omega != 0 {
        return Err(format!("corpus has {} graphs, {} with ω", r.graphs, r.with_omega));
    }
    for i in 0..r.graphs {
        let g = corpus::corpus_graph(SEED, i, false);
        let copies: u64 = g.vertices().map(|v| g.emitted(v).unwrap_or(u64::MAX)).sum();
        if g.vertex_count() > 7 || copies > 14 {
            return Err(format!("graph {i} exceeds 7 vertices or 14 edges"));
        }
    }
    if r.four_way_disagreements != 0 || r.errors != 0 || r.witness_failures != 0 {
        return Err(format!(
            "{} disagreements, {} errors, {} witness failures; first: {:?}",
            r.four_way_disagreements,
            r.errors,
            r.witness_failures,
            r.failures.first()
        ));
    }
    Ok(format!("{} graphs, zero disagreements", r.graphs))
}

fn criterion_3() -> Outcome {
    let plain = run_corpus(CORPUS_SIZE, SEED, false, WITNESS_ORDER, Mode::Parallel);
    let omega = run_corpus(CORPUS_SIZE, SEED, true, WITNESS_ORDER, Mode::Parallel);
    let disagreements = plain.route_disagreements + omega.route_disagreements;
    let errors = plain.errors + omega.errors;
    if disagreements != 0 || errors != 0 {
        return Err(format!("{disagreements} route disagreements, {errors} errors; first: {:?}", omega.failures.first()));
    }
    if omega.with_omega == 0 {
        return Err("no ω graphs in the corpus".into());
    }
    Ok(format!("{} graphs ({} with ω), zero disagreements", plain.graphs + omega.graphs, omega.with_omega))
}

fn criterion_4() -> Outcome {
    let mut graphs = 0;
    for omega in [false, true] {
        for i in 0..CORPUS_SIZE {
            let g = corpus::corpus_graph(SEED, i, omega);
            let Some((cycle, exit)) = cycle_with_exit(&g) else { continue };
            let alg = Algebra::new(&g);
            let pair = ElementPairWitness::from_cycle(&alg, &cycle);
            let x = alg.parse(&pair.x).map_err(|e| e.to_string())?;
            let y = alg.parse(&pair.y).map_err(|e| e.to_string())?;
            let u = alg.parse(&pair.u).map_err(|e| e.to_string())?;
            if alg.mul(&x, &y) != u || alg.mul(&y, &x) == u {
                return Err(format!("element pair fails on graph {i}"));
            }
            let units = MatrixUnitsWitness::build(&alg, &cycle, exit, WITNESS_ORDER);
            let eps: Vec<Vec<Element>> = units
                .units
                .iter()
                .map(|row| row.iter().map(|s| alg.parse(s)).collect::<lpa_core::Result<Vec<_>>>())
                .collect::<lpa_core::Result<_>>()
                .map_err(|e| e.to_string())?;
            common::check_matrix_units(&alg, &eps).map_err(|e| format!("graph {i}: {e}"))?;
            units.verify(&alg).map_err(|e| format!("graph {i}: {e}"))?;
            graphs += 1;
        }
    }
    Ok(format!("{graphs} graphs with a cycle exit, order {WITNESS_ORDER}"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut graphs: Vec<Graph> = (0..SINGLE_SINK_GRAPHS).map(|_| corpus::random_single_sink(&mut rng, 6)).collect();
    graphs.extend((0..COMETS).map(|_| corpus::random_comet(&mut rng, 5)));
    let mut entries = 0;
    for (k, g) in graphs.iter().enumerate() {
        let alg = Algebra::new(g);
        let m = build_realization(g).map_err(|e| format!("graph {k}: {e}"))?;
        let h = homomorphism_audit(&m, &alg, PAIRS, &mut rng).map_err(|e| format!("graph {k}: {e}"))?;
        if !h.passed() || h.pairs < PAIRS {
            return Err(format!("graph {k}: {h:?}"));
        }
        let a = grading_audit(&m, &alg, GRADING_SAMPLES, &mut rng).map_err(|e| format!("graph {k}: {e}"))?;
        if !a.violations.is_empty() {
            return Err(format!("graph {k}: {:?}", a.violations));
        }
        entries += a.entries_checked;
    }
    let mut acyclic = 0;
    for (name, g) in corpus::fixtures() {
        if !g.is_acyclic() || g.has_omega() {
            continue;
        }
        let d = dimension_audit(&g).map_err(|e| format!("{name}: {e}"))?;
        let oracle = common::count_reduced_monomials(&g);
        if !d.agree || d.basis_count != oracle {
            return Err(format!("{name}: {d:?}, enumeration gives {oracle}"));
        }
        acyclic += 1;
    }
    Ok(format!(
        "{SINGLE_SINK_GRAPHS} single-sink graphs and {COMETS} comets with {PAIRS} pairs each, \
         {entries} graded entries, {acyclic} acyclic fixtures"
    ))
}

fn criterion_6() -> Outcome {
    let mut checked = Vec::new();
    for (name, g) in corpus::fixtures() {
        if !g.is_acyclic() || g.has_omega() {
            continue;
        }
        let spectrum = graded_primitive_spectrum(&g);
        let r = subdirect_faithfulness(&g, Field::Rational, &spectrum).map_err(|e| format!("{name}: {e}"))?;
        if !r.faithful || r.rank != r.basis_count {
            return Err(format!("{name}: {r:?}"));
        }
        checked.push(format!("{name} {}/{}", r.rank, r.basis_count));
    }
    Ok(checked.join(", "))
}

fn verdict(g: &Graph, p: Property) -> Result<bool, String> {
    decide(&Algebra::new(g), p, WITNESS_ORDER).map(|v| v.verdict).map_err(|e| e.to_string())
}

fn criterion_7() -> Outcome {
    let fx = |n: &str| corpus::fixture(n).expect("fixture");
    let single = fx("single_loop");
    if !verdict(&single, Property::GradedSigmaV)? || verdict(&single, Property::SigmaV)? {
        return Err("single loop: expected graded Σ-V true, Σ-V false".into());
    }
    let comet = fx("comet");
    let d = semisimple_decomposition(&comet).map_err(|e| e.to_string())?;
    if d.display() != "M_2(K[x,x^-1])(0,1)" || verdict(&comet, Property::SigmaV)? {
        return Err(format!("comet: got {} and expected Σ-V false", d.display()));
    }
    let rose = fx("rose2");
    for p in Property::ALL {
        if verdict(&rose, p)? {
            return Err(format!("rose-2: {} should be false", p.name()));
        }
    }
    let clock = fx("clock3");
    if !verdict(&clock, Property::SigmaV)? {
        return Err("clock-3: Σ-V should hold".into());
    }
    let spectrum = graded_primitive_spectrum(&clock);
    let m2 = Shape::MatrixOverK { size: 2, shifts: vec![0, 1] };
    if spectrum.len() != 3 || spectrum.iter().any(|d| d.shape != m2) {
        return Err("clock-3: every primitive quotient should be M_2(K)".into());
    }
    let stale = common::golden_mismatches();
    if !stale.is_empty() {
        return Err(format!("golden files differ: {}", stale.join(", ")));
    }
    Ok(format!("worked examples hold, {} golden files byte-stable", common::GOLDEN.len()))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("rewriting soundness and confluence", Some(LIMIT_REWRITING), criterion_1),
        ("finite-graph equivalences", Some(LIMIT_EQUIVALENCES), criterion_2),
        ("two-route graded Σ-V agreement", None, criterion_3),
        ("witness soundness", Some(LIMIT_WITNESSES), criterion_4),
        ("realization audits", None, criterion_5),
        ("subdirect faithfulness", None, criterion_6),
        ("worked-example regression", None, criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        match timed(limit, f) {
            Ok(msg) => println!("PASS {}: {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {}: {name}: {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
