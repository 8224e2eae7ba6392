use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use super::LimitDensity;

/// Below this many effective draws an estimate is flagged as degenerate.
pub const MIN_EFFECTIVE_SAMPLES: f64 = 10.0;

/// Importance-sampling estimate of `int phi_unnorm` over the simplex
/// (Lebesgue measure on the chart that drops one coordinate).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizerEstimate {
    pub value: f64,
    pub standard_error: f64,
    pub sample_count: usize,
    /// Kish effective sample size of the importance weights.
    pub effective_sample_size: f64,
    pub degenerate: bool,
}

/// Proposal `Dirichlet(a)`, which matches the edge exponents of the tree
/// form; the weight `phi / q` then only carries the vertex and spanning-tree
/// factors.
pub fn estimate_normalizer<R: Rng + ?Sized>(
    density: &LimitDensity<'_>,
    n: usize,
    rng: &mut R,
) -> NormalizerEstimate {
    let n = n.max(1);
    let a = density.weights();
    let gammas: Vec<Gamma<f64>> = a
        .iter()
        .map(|&ae| Gamma::new(ae, 1.0).expect("weights are positive"))
        .collect();
    let log_norm = ln_gamma(a.iter().sum()) - a.iter().map(|&ae| ln_gamma(ae)).sum::<f64>();

    let mut log_w = Vec::with_capacity(n);
    let mut x = vec![0.0; a.len()];
    while log_w.len() < n {
        for (xe, g) in x.iter_mut().zip(&gammas) {
            *xe = g.sample(rng);
        }
        let s: f64 = x.iter().sum();
        if x.iter().any(|v| *v <= 0.0) {
            continue;
        }
        for xe in &mut x {
            *xe /= s;
        }
        let log_q = log_norm
            + x.iter()
                .zip(a)
                .map(|(xe, ae)| (ae - 1.0) * xe.ln())
                .sum::<f64>();
        log_w.push(density.log_phi_unchecked(&x) - log_q);
    }

    let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = log_w.iter().map(|l| (l - max).exp()).collect();
    let sum: f64 = w.iter().sum();
    let sum_sq: f64 = w.iter().map(|v| v * v).sum();
    let mean = sum / n as f64;
    let var = if n > 1 {
        (sum_sq - n as f64 * mean * mean).max(0.0) / (n - 1) as f64
    } else {
        0.0
    };
    let scale = max.exp();
    let ess = sum * sum / sum_sq;
    NormalizerEstimate {
        value: mean * scale,
        standard_error: (var / n as f64).sqrt() * scale,
        sample_count: n,
        effective_sample_size: ess,
        degenerate: ess < MIN_EFFECTIVE_SAMPLES,
    }
}
