mod common;

use num_bigint::BigInt;
use num_rational::Ratio;
use proptest::prelude::*;
use rand::Rng;

use errw_core::density::{
    estimate_normalizer, markov_path_probability, mcmc_sample, mixture_path_probability,
    JointSampler, LimitDensity, SamplerConfig, TARGET_ACCEPTANCE,
};
use errw_core::exact::to_f64;
use errw_core::law::path_probability;
use errw_core::stats::{mean_estimate, moment_summary};
use errw_core::{seeded_rng, Graph, Rational, Trajectory};

use common::{random_connected_graph, triangle_density, triangle_moments};

const H: f64 = 1.0 / 32.0;

fn triangle() -> Graph {
    Graph::builtin("triangle").unwrap()
}

fn random_simplex_point(rng: &mut impl Rng, m: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|_| rng.random_range(0.01..1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.iter().map(|v| v / s).collect()
}

fn batches(n: usize) -> usize {
    ((n as f64).sqrt() as usize).clamp(2, 1000)
}

#[test]
fn uniform_point_on_triangle() {
    let g = triangle();
    let d = LimitDensity::new(&g, 0, &[1.0; 3]).unwrap();
    let v = d.log_phi(&[1.0 / 3.0; 3]).unwrap();
    assert!((v - 1.0726).abs() < 5e-5);
    assert!((v - triangle_density([1.0; 3], [1.0 / 3.0; 3]).ln()).abs() < 1e-12);
}

#[test]
fn library_matches_hand_written_triangle_density() {
    let g = triangle();
    let mut rng = seeded_rng(3);
    for _ in 0..200 {
        let a = [
            rng.random_range(0.2..3.0),
            rng.random_range(0.2..3.0),
            rng.random_range(0.2..3.0),
        ];
        let x = random_simplex_point(&mut rng, 3);
        let d = LimitDensity::new(&g, 0, &a).unwrap();
        let hand = triangle_density(a, [x[0], x[1], x[2]]).ln();
        assert!((d.log_phi(&x).unwrap() - hand).abs() < 1e-10);
        assert!((d.log_phi_tree_form(&x).unwrap() - hand).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn determinant_and_tree_forms_agree(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let g = random_connected_graph(&mut rng, 7, 11);
        let m = g.edge_count();
        let a: Vec<f64> = (0..m).map(|_| rng.random_range(0.1..4.0)).collect();
        let v0 = rng.random_range(0..g.vertex_count());
        let d = LimitDensity::new(&g, v0, &a).unwrap();
        let x = random_simplex_point(&mut rng, m);
        prop_assert!((d.log_phi(&x).unwrap() - d.log_phi_tree_form(&x).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn mcmc_moments_match_quadrature() {
    let g = triangle();
    let a = [1.0, 2.0, 0.5];
    let d = LimitDensity::new(&g, 0, &a).unwrap();
    let config = SamplerConfig {
        samples: 100_000,
        burn_in: 10_000,
        thin: 5,
        ..SamplerConfig::default()
    };
    let s = mcmc_sample(&d, &config, &mut seeded_rng(17));
    let acc = s.diagnostics.acceptance_rate;
    assert!(
        acc > TARGET_ACCEPTANCE.0 - 0.05 && acc < TARGET_ACCEPTANCE.1 + 0.05,
        "{acc}"
    );
    let summary = moment_summary(s.flat(), 3, Some(batches(s.len())));
    let quad = triangle_moments(a, H);
    for e in 0..3 {
        let m = summary.mean[e];
        assert!(
            (m.value - quad.mean[e]).abs() <= 3.0 * m.standard_error,
            "{e}: {m:?} vs {}",
            quad.mean[e]
        );
    }
    for k in 0..9 {
        let c = summary.covariance[k];
        assert!(
            (c.value - quad.cov[k]).abs() <= 3.0 * c.standard_error,
            "{k}: {c:?} vs {}",
            quad.cov[k]
        );
    }
}

/// Swapping `B` and `C` fixes the start `A` and exchanges the edges `A-B`
/// and `C-A`.
#[test]
fn marginals_at_the_start_are_symmetric() {
    let quad = triangle_moments([1.0; 3], H);
    assert!((quad.mean[0] - quad.mean[2]).abs() < 1e-10);
    assert!(quad.mean[1] < quad.mean[0]);

    let g = triangle();
    let d = LimitDensity::new(&g, 0, &[1.0; 3]).unwrap();
    let s = mcmc_sample(&d, &SamplerConfig::new(50_000), &mut seeded_rng(5));
    let diff: Vec<f64> = s.iter().map(|x| x[0] - x[2]).collect();
    let est = mean_estimate(&diff, Some(batches(diff.len())));
    assert!(est.value.abs() <= 3.0 * est.standard_error, "{est:?}");
}

#[test]
fn normalizer_matches_quadrature() {
    let g = triangle();
    let d = LimitDensity::new(&g, 0, &[1.0; 3]).unwrap();
    let z = triangle_moments([1.0; 3], H).normalizer;
    let small = estimate_normalizer(&d, 100_000, &mut seeded_rng(8));
    let large = estimate_normalizer(&d, 200_000, &mut seeded_rng(9));
    for est in [small, large] {
        assert!(!est.degenerate);
        assert!(
            (est.value - z).abs() <= 3.0 * est.standard_error,
            "{est:?} vs {z}"
        );
    }
}

/// The importance weights have heavy tails, so single standard errors are
/// noisy; the scaling shows up in the median over repeated trials.
#[test]
fn normalizer_error_scales_with_sample_size() {
    let g = triangle();
    let d = LimitDensity::new(&g, 0, &[1.0; 3]).unwrap();
    let median_se = |n: usize, seed0: u64| {
        let mut se: Vec<f64> = (0..30)
            .map(|i| estimate_normalizer(&d, n, &mut seeded_rng(seed0 + i)).standard_error)
            .collect();
        se.sort_by(f64::total_cmp);
        (se[14] + se[15]) / 2.0
    };
    let ratio = median_se(10_000, 100) / median_se(20_000, 200);
    assert!((ratio - 2f64.sqrt()).abs() < 0.2, "{ratio}");
}

fn invert3(m: &[f64]) -> Vec<f64> {
    let det = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6])
        + m[2] * (m[3] * m[7] - m[4] * m[6]);
    let c = |a: usize, b: usize, c: usize, d: usize| (m[a] * m[d] - m[b] * m[c]) / det;
    vec![
        c(4, 5, 7, 8),
        -c(1, 2, 7, 8),
        c(1, 2, 4, 5),
        -c(3, 5, 6, 8),
        c(0, 2, 6, 8),
        -c(0, 2, 3, 5),
        c(3, 4, 6, 7),
        -c(0, 1, 6, 7),
        c(0, 1, 3, 4),
    ]
}

#[test]
fn joint_draws_on_k4() {
    let g = Graph::builtin("k4").unwrap();
    let sampler = JointSampler::new(&g).unwrap();
    assert_eq!(sampler.basis().dimension(), 3);
    let mut rng = seeded_rng(21);
    let x = random_simplex_point(&mut rng, g.edge_count());
    let draws = 100_000;
    let mut hits = vec![0u64; sampler.trees().len()];
    let mut coords = Vec::with_capacity(3 * draws);
    for _ in 0..draws {
        let d = sampler.sample(&x, &mut rng).unwrap();
        hits[d.tree] += 1;
        coords.extend_from_slice(&d.coords);
    }
    let weights: Vec<f64> = sampler
        .trees()
        .iter()
        .map(|t| t.edges().iter().map(|&e| x[e]).product())
        .collect();
    let total: f64 = weights.iter().sum();
    for (h, w) in hits.iter().zip(&weights) {
        let p = w / total;
        let se = (p * (1.0 - p) / draws as f64).sqrt();
        assert!((*h as f64 / draws as f64 - p).abs() <= 3.0 * se);
    }
    let b = sampler.basis().vectors();
    let gram: Vec<f64> = (0..9)
        .map(|k| {
            let (i, j) = (k / 3, k % 3);
            (0..g.edge_count())
                .map(|e| (b[i][e] * b[j][e]) as f64 / x[e])
                .sum()
        })
        .collect();
    let expected = invert3(&gram);
    let summary = moment_summary(&coords, 3, None);
    for i in 0..3 {
        assert!(summary.mean[i].value.abs() <= 3.0 * summary.mean[i].standard_error);
    }
    for k in 0..9 {
        let c = summary.covariance[k];
        assert!(
            (c.value - expected[k]).abs() <= 3.0 * c.standard_error,
            "{k}: {c:?} vs {}",
            expected[k]
        );
    }
}

/// On the diamond the cycle space is two-dimensional; the Gaussian part of
/// the joint density integrates by the trapezoid rule to near machine
/// precision, and the result over `phi` is the constant `2 pi`.
#[test]
fn joint_density_integrates_to_phi_on_diamond() {
    let g = Graph::builtin("diamond").unwrap();
    let sampler = JointSampler::new(&g).unwrap();
    let mut rng = seeded_rng(4);
    let a: Vec<f64> = (0..g.edge_count())
        .map(|_| rng.random_range(0.5..2.0))
        .collect();
    let d = LimitDensity::new(&g, 0, &a).unwrap();
    assert_eq!(sampler.basis().dimension(), 2);
    let b = &sampler.basis().vectors();
    for _ in 0..20 {
        let x = random_simplex_point(&mut rng, g.edge_count());
        // Gram matrix and the 2-D Gaussian integral on a tensor grid
        let gram: Vec<f64> = (0..4)
            .map(|k| {
                let (i, j) = (k / 2, k % 2);
                (0..g.edge_count())
                    .map(|e| (b[i][e] * b[j][e]) as f64 / x[e])
                    .sum()
            })
            .collect();
        // marginal standard deviations from the inverse Gram matrix
        let det = gram[0] * gram[3] - gram[1] * gram[2];
        let s0 = (gram[3] / det).sqrt();
        let s1 = (gram[0] / det).sqrt();
        let n = 160;
        let (h0, h1) = (24.0 * s0 / n as f64, 24.0 * s1 / n as f64);
        let mut total = 0.0;
        for tree in sampler.trees() {
            for i in 0..=n {
                for j in 0..=n {
                    let c = [-12.0 * s0 + i as f64 * h0, -12.0 * s1 + j as f64 * h1];
                    let y = sampler.basis().combine(&c);
                    total += d.log_joint(&x, &y, tree).unwrap().exp() * h0 * h1;
                }
            }
        }
        let ratio = total / d.log_phi(&x).unwrap().exp();
        assert!(
            (ratio / (2.0 * std::f64::consts::PI) - 1.0).abs() < 1e-6,
            "{ratio}"
        );
    }
}

#[test]
fn markov_path_examples() {
    let g = triangle();
    let x = [1.0 / 3.0; 3];
    assert!((markov_path_probability(&g, &x, 0, &[0, 1]).unwrap() - 0.5).abs() < 1e-15);
    assert!((markov_path_probability(&g, &x, 0, &[0, 1, 2]).unwrap() - 0.25).abs() < 1e-15);
    assert_eq!(markov_path_probability(&g, &x, 0, &[1, 2]).unwrap(), 0.0);
    let x = [0.5, 0.25, 0.25];
    // A -> B: 0.5 / (0.5 + 0.25)
    assert!((markov_path_probability(&g, &x, 0, &[0, 1]).unwrap() - 2.0 / 3.0).abs() < 1e-15);
}

/// On a path graph the mixture reproduces the reinforced walk too.
#[test]
fn mixture_on_a_path_graph() {
    let g = Graph::builtin("path3").unwrap();
    let a = [1.0, 0.5];
    let aq: Vec<Rational> = vec![
        Ratio::from_integer(BigInt::from(1)),
        Ratio::new(BigInt::from(1), BigInt::from(2)),
    ];
    let d = LimitDensity::new(&g, 0, &a).unwrap();
    let s = mcmc_sample(&d, &SamplerConfig::new(100_000), &mut seeded_rng(12));
    let mut paths = vec![vec![0usize]];
    for _ in 0..4 {
        paths = paths
            .into_iter()
            .flat_map(|p| {
                let last = *p.last().unwrap();
                g.incident(last)
                    .iter()
                    .map(move |inc| {
                        let mut q = p.clone();
                        q.push(inc.neighbor);
                        q
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        for p in &paths {
            let exact = to_f64(
                &path_probability(&g, 0, &aq, &Trajectory::new(&g, p.clone()).unwrap()).unwrap(),
            );
            let est = mixture_path_probability(&g, 0, p, &s).unwrap();
            let tol = 3.0 * est.standard_error + 1e-12;
            assert!(
                (est.value - exact).abs() <= tol,
                "{p:?}: {est:?} vs {exact}"
            );
        }
    }
}
