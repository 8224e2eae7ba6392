mod common;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::Ratio;
use proptest::prelude::*;
use rand::Rng;

use errw_core::exact::to_f64;
use errw_core::law::path_probability;
use errw_core::stats::{mean_estimate, RunningMoments};
use errw_core::tree::{
    dirichlet_parameters, rwre_path_probability, sample_environment, simulate_via_urns, urn_init,
    urn_path_probability, REINFORCEMENT,
};
use errw_core::{seeded_rng, Graph, InitialWeights, Rational, Trajectory, WalkState};

use common::{random_connected_graph, trees};

fn r(p: i64, q: i64) -> Rational {
    Ratio::new(BigInt::from(p), BigInt::from(q))
}

/// Star `O - L1, O - L2, O - L3` walked for `2 * draws` steps from `O`: the
/// walk's draws at `O` are the colour sequence; every leaf sends it back.
#[test]
fn draws_at_a_vertex_are_exchangeable() {
    let star = Graph::builtin("star4").unwrap();
    let a = vec![r(1, 2), r(1, 1), r(3, 2)];
    let leaves: Vec<usize> = (1..4)
        .map(|i| star.vertex(&format!("L{i}")).unwrap())
        .collect();
    for draws in 1..=6u32 {
        let mut by_counts: HashMap<[u32; 3], Rational> = HashMap::new();
        for code in 0..3u32.pow(draws) {
            let mut seq = Vec::new();
            let mut c = code;
            for _ in 0..draws {
                seq.push((c % 3) as usize);
                c /= 3;
            }
            let mut counts = [0u32; 3];
            let mut path = vec![0usize];
            for &s in &seq {
                counts[s] += 1;
                path.push(leaves[s]);
                path.push(0);
            }
            let traj = Trajectory::new(&star, path).unwrap();
            let p = urn_init(&star, 0, &a)
                .unwrap()
                .sequence_probability(&traj)
                .unwrap();
            match by_counts.get(&counts) {
                Some(q) => assert_eq!(q, &p),
                None => {
                    by_counts.insert(counts, p);
                }
            }
        }
    }
}

#[test]
fn urn_totals_grow_by_two_per_draw() {
    let mut rng = seeded_rng(6);
    for g in trees(5) {
        let a: Vec<Rational> = (0..g.edge_count())
            .map(|_| r(rng.random_range(1..=4), 2))
            .collect();
        let mut urns = urn_init(&g, 0, &a).unwrap();
        let initial: Vec<Rational> = (0..g.vertex_count()).map(|v| urns.total(v)).collect();
        let mut v = 0;
        for _ in 0..40 {
            let to = g.incident(v)[rng.random_range(0..g.degree(v))].neighbor;
            urns.reinforce(v, to).unwrap();
            v = to;
        }
        for u in 0..g.vertex_count() {
            let expected = &initial[u] + r((REINFORCEMENT * urns.draws(u)) as i64, 1);
            assert_eq!(urns.total(u), expected);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn three_laws_agree_on_random_trees(seed in any::<u64>(), len in 0usize..16) {
        let mut rng = seeded_rng(seed);
        let g = loop {
            let g = random_connected_graph(&mut rng, 8, 7);
            if g.edge_count() + 1 == g.vertex_count() {
                break g;
            }
        };
        let a: Vec<Rational> = (0..g.edge_count()).map(|_| r(rng.random_range(1..=5), rng.random_range(1..=3))).collect();
        let v0 = rng.random_range(0..g.vertex_count());
        let w = InitialWeights::new(a.clone()).unwrap();
        let path = WalkState::new(&g, v0, &w).unwrap().run(len, &mut rng).unwrap();
        let p = path_probability(&g, v0, &a, &path).unwrap();
        prop_assert_eq!(&urn_path_probability(&g, v0, &a, &path).unwrap(), &p);
        prop_assert_eq!(&rwre_path_probability(&g, v0, &a, &path).unwrap(), &p);
    }

    #[test]
    fn urn_and_walk_trajectories_coincide(seed in any::<u64>(), steps in 0usize..300) {
        let mut rng = seeded_rng(seed);
        let g = loop {
            let g = random_connected_graph(&mut rng, 9, 8);
            if g.edge_count() + 1 == g.vertex_count() {
                break g;
            }
        };
        let a: Vec<Rational> = (0..g.edge_count()).map(|_| r(rng.random_range(1..=5), 2)).collect();
        let w = InitialWeights::new(a.clone()).unwrap();
        let walk = WalkState::new(&g, 0, &w).unwrap().run(steps, &mut seeded_rng(seed ^ 1)).unwrap();
        let urn = simulate_via_urns(&urn_init(&g, 0, &a).unwrap(), steps, &mut seeded_rng(seed ^ 1)).unwrap();
        prop_assert_eq!(walk, urn);
    }
}

/// `O - A, O - B, A - C, A - D`: two vertices with random transition laws.
#[test]
fn environment_means_and_independence() {
    let g = Graph::from_edges(&[("O", "A"), ("O", "B"), ("A", "C"), ("A", "D")]).unwrap();
    let a = vec![r(1, 1), r(2, 1), r(1, 2), r(3, 2)];
    let env = dirichlet_parameters(&g, 0, &a).unwrap();
    let (o, av) = (g.vertex("O").unwrap(), g.vertex("A").unwrap());
    let mut rng = seeded_rng(31);
    let n = 40_000;
    let mut po = Vec::with_capacity(n);
    let mut pa: Vec<Vec<f64>> = vec![Vec::with_capacity(n); g.degree(av)];
    for _ in 0..n {
        let p = sample_environment(&env, &mut rng);
        for row in &p {
            if !row.is_empty() {
                assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
        po.push(p[o][0]);
        for (j, col) in pa.iter_mut().enumerate() {
            col.push(p[av][j]);
        }
    }
    let check_mean = |series: &[f64], beta: &[Rational], j: usize| {
        let total: f64 = beta.iter().map(to_f64).sum();
        let expected = to_f64(&beta[j]) / total;
        let est = mean_estimate(series, None);
        assert!(
            (est.value - expected).abs() <= 3.0 * est.standard_error,
            "{est:?} vs {expected}"
        );
    };
    check_mean(&po, env.params(o), 0);
    for (j, col) in pa.iter().enumerate() {
        check_mean(col, env.params(av), j);
    }
    // independent vertices: the covariance estimate is zero within 3 SE
    let (mo, ma) = (
        po.iter().sum::<f64>() / n as f64,
        pa[0].iter().sum::<f64>() / n as f64,
    );
    let prod: RunningMoments = po
        .iter()
        .zip(&pa[0])
        .map(|(x, y)| (x - mo) * (y - ma))
        .collect();
    assert!(prod.mean().abs() <= 3.0 * prod.standard_error());
}
