mod common;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

use errw_core::law::{
    conditional_step_probability, path_probability, sequential_path_probability, ExactLaw,
};
use errw_core::{seeded_rng, Graph, InitialWeights, Rational, Trajectory, WalkState};

use common::{
    assignments, connected_graphs, for_each_path, q, random_connected_graph, weight_values, Q,
};

fn random_rational_weights(rng: &mut impl Rng, m: usize) -> Vec<Rational> {
    (0..m)
        .map(|_| {
            Ratio::new(
                BigInt::from(rng.random_range(1..=6)),
                BigInt::from(rng.random_range(1..=4)),
            )
        })
        .collect()
}

/// Every step of every short path on every small graph has the one-step
/// probability `(a_e + k(e)) / (a_v + 2 k(v) - 2 + [v != v0])`, written out
/// here from local times alone.
#[test]
fn one_step_law_depends_on_local_times_only() {
    let values = weight_values();
    for g in connected_graphs(4) {
        let n = g.vertex_count();
        for a in assignments(g.edge_count(), &values) {
            let a_vertex: Vec<Q> = (0..n)
                .map(|v| g.incident(v).iter().map(|inc| a[inc.edge]).sum())
                .collect();
            for v0 in 0..n {
                for_each_path(&g, v0, &a, 7, |node| {
                    let t = node.edges.len();
                    if t == 0 {
                        return;
                    }
                    let e = node.edges[t - 1];
                    let v = node.path[t - 1];
                    let k_e = node.counts[e] - 1;
                    let visits = node.path[..t].iter().filter(|&&u| u == v).count() as u64;
                    let mut den = a_vertex[v] + q(2 * visits as i64 - 2, 1);
                    if v != v0 {
                        den += q(1, 1);
                    }
                    let expected = (a[e] + q(k_e as i64, 1)) / den;
                    let step = node.prefix[t] / node.prefix[t - 1];
                    assert_eq!(step, expected);
                    assert_eq!(
                        conditional_step_probability(&a[e], k_e, &a_vertex[v], visits, v == v0),
                        expected
                    );
                });
            }
        }
    }
}

/// Paths with the same start and the same crossing counts.
#[test]
fn equal_counts_equal_probability_examples() {
    let g = Graph::from_edges(&[("A", "B"), ("B", "C"), ("C", "D"), ("D", "A")]).unwrap();
    let a: Vec<Rational> = (1..=4)
        .map(|i| Ratio::new(BigInt::from(i), BigInt::from(2)))
        .collect();
    let pairs = [
        (vec!["A", "B", "C", "D", "A"], vec!["A", "D", "C", "B", "A"]),
        (vec!["A", "B", "A", "D", "A"], vec!["A", "D", "A", "B", "A"]),
        (
            vec!["A", "B", "C", "B", "A", "D"],
            vec!["A", "B", "A", "B", "A", "D"],
        ),
    ];
    for (p, r) in &pairs[..2] {
        let p1 = Trajectory::from_names(&g, p).unwrap();
        let p2 = Trajectory::from_names(&g, r).unwrap();
        assert_eq!(p1.edge_counts(&g), p2.edge_counts(&g));
        assert_eq!(
            sequential_path_probability(&g, 0, &a, &p1).unwrap(),
            sequential_path_probability(&g, 0, &a, &p2).unwrap()
        );
    }
    // same length and endpoints but different counts
    let p1 = Trajectory::from_names(&g, &pairs[2].0).unwrap();
    let p2 = Trajectory::from_names(&g, &pairs[2].1).unwrap();
    assert_ne!(p1.edge_counts(&g), p2.edge_counts(&g));
    assert_ne!(
        sequential_path_probability(&g, 0, &a, &p1).unwrap(),
        sequential_path_probability(&g, 0, &a, &p2).unwrap()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn closed_form_matches_sequential_product(seed in any::<u64>(), len in 0usize..40) {
        let mut rng = seeded_rng(seed);
        let g = random_connected_graph(&mut rng, 6, 9);
        let a = random_rational_weights(&mut rng, g.edge_count());
        let v0 = rng.random_range(0..g.vertex_count());
        let w = InitialWeights::new(a.clone()).unwrap();
        let path = WalkState::new(&g, v0, &w).unwrap().run(len, &mut rng).unwrap();
        prop_assert_eq!(
            path_probability(&g, v0, &a, &path).unwrap(),
            sequential_path_probability(&g, v0, &a, &path).unwrap()
        );
    }

    #[test]
    fn step_probabilities_sum_to_one(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let g = random_connected_graph(&mut rng, 6, 9);
        let a = random_rational_weights(&mut rng, g.edge_count());
        let v0 = rng.random_range(0..g.vertex_count());
        let mut law = ExactLaw::new(&g, v0, &a).unwrap();
        for _ in 0..30 {
            let here = law.position();
            let probs: Vec<Rational> = g.incident(here).iter().map(|i| law.step_probability(i.neighbor)).collect();
            prop_assert_eq!(probs.iter().fold(Rational::zero(), |s, p| s + p), Rational::one());
            let pick = g.incident(here)[rng.random_range(0..probs.len())].neighbor;
            law.advance(pick).unwrap();
        }
    }

    #[test]
    fn weights_are_initial_plus_crossings(seed in any::<u64>(), steps in 0usize..500) {
        let mut rng = seeded_rng(seed);
        let g = random_connected_graph(&mut rng, 7, 12);
        let base: Vec<f64> = (0..g.edge_count()).map(|_| rng.random_range(0.1..3.0)).collect();
        let mut w = WalkState::with_float_weights(&g, 0, base.clone()).unwrap();
        let path = w.run(steps, &mut rng).unwrap();
        let counts = path.edge_counts(&g);
        prop_assert_eq!(w.edge_counts(), counts.as_slice());
        for e in 0..g.edge_count() {
            prop_assert_eq!(w.weight(e), base[e] + counts[e] as f64);
        }
        prop_assert_eq!(counts.iter().sum::<u64>(), steps as u64);
    }

    #[test]
    fn last_exit_tree_is_acyclic(seed in any::<u64>(), steps in 1usize..200) {
        let mut rng = seeded_rng(seed);
        let g = random_connected_graph(&mut rng, 8, 14);
        let base = vec![1.0; g.edge_count()];
        let path = WalkState::with_float_weights(&g, 0, base).unwrap().run(steps, &mut rng).unwrap();
        let tree = path.last_exit_tree(&g).unwrap();
        prop_assert!(tree.is_acyclic(&g));
        let visited = {
            let mut seen = vec![false; g.vertex_count()];
            for &v in path.vertices() {
                seen[v] = true;
            }
            seen.iter().filter(|&&s| s).count()
        };
        prop_assert_eq!(tree.edges().len(), visited - 1);
    }

    #[test]
    fn rescaled_current_is_nearly_divergence_free(seed in any::<u64>(), steps in 1usize..2000) {
        let mut rng = seeded_rng(seed);
        let g = random_connected_graph(&mut rng, 7, 12);
        let base = vec![1.0; g.edge_count()];
        let path = WalkState::with_float_weights(&g, 0, base).unwrap().run(steps, &mut rng).unwrap();
        let (chain, beta) = path.chain_vector(&g).unwrap();
        let s = g.incidence();
        let bound = (steps as f64).sqrt().recip();
        for (v, &d) in s.apply_int(&chain).iter().enumerate() {
            prop_assert!(d.abs() <= 1);
            let expected = if path.start() == path.end() { 0 } else if v == path.start() || v == path.end() { 1 } else { 0 };
            prop_assert_eq!(d.abs(), expected);
        }
        for d in s.apply(&beta) {
            prop_assert!(d.abs() <= bound * (1.0 + 1e-12));
        }
    }
}

#[test]
fn last_exit_tree_spans_after_long_runs() {
    let mut rng = seeded_rng(9);
    for g in connected_graphs(5).iter().filter(|g| g.vertex_count() <= 6) {
        let base = vec![1.0; g.edge_count()];
        let path = WalkState::with_float_weights(g, 0, base)
            .unwrap()
            .run(10_000, &mut rng)
            .unwrap();
        assert!(path.last_exit_tree(g).unwrap().is_spanning(g));
    }
}
