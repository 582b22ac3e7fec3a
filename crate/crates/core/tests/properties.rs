mod common;

use std::collections::{BTreeMap, BTreeSet};

use lpa_core::corpus;
use lpa_core::decision::{decide_graded_sigma_v, Property};
use lpa_core::realization::{build_realization, rank};
use lpa_core::structure::{hs_closure, is_hereditary_saturated, maximal_tails, VertexSet};
use lpa_core::{Algebra, Field, Graph};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn graph(seed: u64, omega: bool) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    corpus::random_graph(&mut rng, 5, 8, omega)
}

fn fixture_graph(k: usize) -> Graph {
    let all = corpus::fixtures();
    all[k % all.len()].1.clone()
}

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::Prime(2)), Just(Field::Prime(7))]
}

fn subsets(n: usize) -> impl Iterator<Item = VertexSet> {
    (0u32..1 << n).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
}

/// Maximal tails by definition, over all nonempty vertex subsets.
fn tails_by_definition(g: &Graph) -> BTreeSet<VertexSet> {
    let reach = g.reachability();
    subsets(g.vertex_count())
        .filter(|t| !t.is_empty())
        .filter(|t| {
            let upward = t.iter().all(|&v| g.vertices().all(|u| !reach[u][v] || t.contains(&u)));
            let directed = t.iter().all(|&a| t.iter().all(|&b| t.iter().any(|&c| reach[a][c] && reach[b][c])));
            let keeps = t
                .iter()
                .filter(|&&v| !g.is_sink(v))
                .all(|&v| g.out_edges(v).iter().any(|&e| t.contains(&g.edge(e).range)));
            upward && directed && keeps
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rule_order_does_not_matter(seed: u64, k in 0usize..9, field in fields()) {
        let g = fixture_graph(k);
        let alg = Algebra::with_field(&g, field);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw = corpus::random_raw(&alg, &mut rng, 4, 7);
        let a = alg.normalize(&raw).unwrap();
        prop_assert_eq!(&a, &alg.normalize_randomized(&raw, &mut rng).unwrap());
        prop_assert_eq!(&a, &common::evaluate(&alg, &raw));
    }

    #[test]
    fn ring_axioms(seed: u64, field in fields()) {
        let g = graph(seed, true);
        let alg = Algebra::with_field(&g, field);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let [a, b, c] = [(); 3].map(|_| corpus::random_element(&alg, &mut rng, 3, 3));
        prop_assert_eq!(alg.mul(&alg.mul(&a, &b), &c), alg.mul(&a, &alg.mul(&b, &c)));
        prop_assert_eq!(alg.mul(&a, &alg.add(&b, &c)), alg.add(&alg.mul(&a, &b), &alg.mul(&a, &c)));
        prop_assert_eq!(alg.mul(&alg.add(&a, &b), &c), alg.add(&alg.mul(&a, &c), &alg.mul(&b, &c)));
        let unit = alg.local_unit(&a);
        prop_assert_eq!(alg.mul(&unit, &a), a.clone());
        prop_assert_eq!(alg.mul(&a, &unit), a.clone());
        prop_assert!(alg.sub(&a, &a).is_zero());
    }

    #[test]
    fn involution(seed: u64) {
        let g = graph(seed, true);
        let alg = Algebra::new(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let a = corpus::random_element(&alg, &mut rng, 3, 3);
        let b = corpus::random_element(&alg, &mut rng, 3, 3);
        prop_assert_eq!(alg.star(&alg.star(&a)), a.clone());
        prop_assert_eq!(alg.star(&alg.mul(&a, &b)), alg.mul(&alg.star(&b), &alg.star(&a)));
        prop_assert_eq!(alg.star(&alg.add(&a, &b)), alg.add(&alg.star(&a), &alg.star(&b)));
    }

    #[test]
    fn grading_is_multiplicative(seed: u64) {
        let g = graph(seed, false);
        let alg = Algebra::new(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
        let a = corpus::random_homogeneous(&alg, &mut rng, 3, 3);
        let b = corpus::random_homogeneous(&alg, &mut rng, 3, 3);
        let p = alg.mul(&a, &b);
        if let (Some(x), Some(y), false) = (a.degree(), b.degree(), p.is_zero()) {
            prop_assert_eq!(p.degree(), Some(x + y));
        }
        let c = corpus::random_element(&alg, &mut rng, 4, 3);
        let parts = alg.homogeneous_components(&c);
        prop_assert_eq!(alg.sum(parts.values()), c);
        for (d, part) in &parts {
            prop_assert_eq!(part.degree(), Some(*d));
        }
    }

    #[test]
    fn literals_round_trip(seed: u64, field in fields()) {
        let g = graph(seed, true);
        let alg = Algebra::with_field(&g, field);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 4);
        let a = corpus::random_element(&alg, &mut rng, 4, 3);
        prop_assert_eq!(alg.parse(&alg.display(&a)).unwrap(), a);
    }

    #[test]
    fn graph_text_round_trips(seed: u64) {
        let g = graph(seed, true);
        prop_assert_eq!(Graph::parse(&g.to_text()).unwrap().to_text(), g.to_text());
    }

    #[test]
    fn hs_closure_is_the_least_hereditary_saturated_superset(seed: u64, mask: u8) {
        let g = graph(seed, true);
        let n = g.vertex_count();
        let x: VertexSet = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let c = hs_closure(&g, &x).unwrap();
        prop_assert!(x.is_subset(&c));
        prop_assert!(is_hereditary_saturated(&g, &c));
        prop_assert_eq!(hs_closure(&g, &c).unwrap(), c.clone());
        let least = subsets(n)
            .filter(|h| x.is_subset(h) && is_hereditary_saturated(&g, h))
            .fold((0..n).collect::<VertexSet>(), |acc, h| &acc & &h);
        prop_assert_eq!(c, least);
    }

    #[test]
    fn maximal_tails_match_the_definition(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let omega = rng.gen_bool(0.5);
        let g = corpus::random_graph(&mut rng, 6, 9, omega);
        let found: BTreeSet<VertexSet> = maximal_tails(&g).into_iter().map(|t| t.vertices).collect();
        prop_assert_eq!(found, tails_by_definition(&g));
    }

    #[test]
    fn graded_sigma_v_routes_agree(seed: u64) {
        let g = graph(seed, true);
        let v = decide_graded_sigma_v(&g);
        prop_assert!(v.is_ok(), "{:?}", v);
        let v = v.unwrap();
        prop_assert_eq!(v.property, Property::GradedSigmaV);
        prop_assert!(v.witness.verify(&Algebra::new(&g)).is_ok());
    }

    #[test]
    fn realization_respects_star(seed: u64, comet: bool) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = if comet { corpus::random_comet(&mut rng, 4) } else { corpus::random_single_sink(&mut rng, 5) };
        let alg = Algebra::new(&g);
        let m = build_realization(&g).unwrap();
        let a = corpus::random_element(&alg, &mut rng, 3, 3);
        let image = m.realize(&alg, &a).unwrap();
        prop_assert_eq!(m.realize(&alg, &alg.star(&a)).unwrap(), image.star());
        let raw = corpus::random_walk_raw(&alg, &mut rng, 2, 3);
        let field = alg.field();
        let mut by_generators = m.zero_matrix();
        for (c, word) in &raw.terms {
            let mut term = m.zero_matrix();
            for i in 0..m.size() {
                term.add_entry(field, i, i, 0, c);
            }
            for s in word {
                let single = lpa_core::RawExpr { terms: vec![(field.one(), vec![*s])] };
                let x = m.realize(&alg, &alg.normalize(&single).unwrap()).unwrap();
                term = term.mul(&x, field);
            }
            by_generators = by_generators.add(&term, field);
        }
        prop_assert_eq!(m.realize(&alg, &alg.normalize(&raw).unwrap()).unwrap(), by_generators);
    }
}

/// Acyclic single-sink graphs: the images of the reduced basis span all
/// `n²` matrix units, so realize is a linear bijection.
#[test]
fn realization_is_a_bijection_on_the_basis() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut graphs: Vec<Graph> = (0..20).map(|_| corpus::random_single_sink(&mut rng, 5)).collect();
    graphs.extend(["line", "isolated", "ladder2x2"].map(|n| corpus::fixture(n).unwrap()));
    for g in graphs {
        let alg = Algebra::new(&g);
        let m = build_realization(&g).unwrap();
        let n = m.size();
        let basis = alg.reduced_basis().unwrap();
        assert_eq!(basis.len(), n * n);
        let rows: Vec<BTreeMap<usize, _>> = basis
            .into_iter()
            .map(|b| {
                let image = m.realize(&alg, &alg.monomial(b)).unwrap();
                image
                    .entries()
                    .map(|((i, j), p)| {
                        let terms: Vec<_> = p.terms().collect();
                        assert_eq!(terms.len(), 1);
                        assert_eq!(terms[0].0, 0);
                        (i * n + j, terms[0].1.clone())
                    })
                    .collect()
            })
            .collect();
        assert_eq!(rank(Field::Rational, &rows), n * n);
    }
}

#[test]
fn four_way_agreement_on_a_fresh_corpus() {
    let r = corpus::run_corpus(500, 99, false, 4, lpa_core::parallel::Mode::Parallel);
    assert_eq!(r.four_way_disagreements, 0, "{:#?}", r.failures.first());
    assert!(r.failures.is_empty());
}
