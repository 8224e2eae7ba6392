use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::LimitDensity;
use crate::stats::effective_sample_size;

/// Random-walk Metropolis settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplerConfig {
    /// Retained states.
    pub samples: usize,
    pub burn_in: usize,
    /// Keep every `thin`-th state after burn-in.
    pub thin: usize,
    pub initial_scale: f64,
    /// Burn-in iterations between scale adjustments.
    pub adapt_window: usize,
}

impl SamplerConfig {
    pub fn new(samples: usize) -> Self {
        SamplerConfig {
            samples,
            ..Self::default()
        }
    }
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            samples: 10_000,
            burn_in: 5_000,
            thin: 1,
            initial_scale: 0.5,
            adapt_window: 100,
        }
    }
}

pub const TARGET_ACCEPTANCE: (f64, f64) = (0.2, 0.5);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplerDiagnostics {
    /// Acceptance rate after burn-in.
    pub acceptance_rate: f64,
    /// Frozen proposal scale.
    pub step_scale: f64,
    /// Smallest per-coordinate effective sample size of the retained chain.
    pub effective_sample_size: f64,
    pub iterations: usize,
}

/// Retained states of the chain, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentSample {
    dim: usize,
    points: Vec<f64>,
    log_density: Vec<f64>,
    pub diagnostics: SamplerDiagnostics,
}

impl EnvironmentSample {
    pub fn len(&self) -> usize {
        self.log_density.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_density.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.dim.max(1)).take(self.len())
    }

    /// Row-major `len x dimension` matrix of the states.
    pub fn flat(&self) -> &[f64] {
        &self.points
    }

    pub fn log_density(&self) -> &[f64] {
        &self.log_density
    }

    /// Coordinate `e` across all retained states.
    pub fn coordinate(&self, e: usize) -> Vec<f64> {
        self.iter().map(|x| x[e]).collect()
    }
}

/// Metropolis rule with a symmetric proposal: accept when `u < exp(log_ratio)`.
#[inline]
pub fn metropolis_accept(log_ratio: f64, u: f64) -> bool {
    log_ratio >= 0.0 || u < log_ratio.exp()
}

/// Samples `phi` on the open simplex. States are kept in centered log
/// coordinates `z` (`x = softmax(z)`, `sum z = 0`), where the target picks up
/// the Jacobian `prod_e x_e`. Proposals add an isotropic Gaussian projected
/// onto `sum z = 0`. The scale is tuned during burn-in and then frozen.
pub fn mcmc_sample<R: Rng + ?Sized>(
    density: &LimitDensity<'_>,
    config: &SamplerConfig,
    rng: &mut R,
) -> EnvironmentSample {
    let m = density.dimension();
    let thin = config.thin.max(1);
    let samples = config.samples.max(1);
    let mut z = vec![0.0; m];
    let mut x = softmax(&z);
    let mut log_phi = density.log_phi_unchecked(&x);
    let mut log_target = log_phi + log_jacobian(&x);
    let mut scale = config.initial_scale;
    let mut z_new = vec![0.0; m];

    let mut points = Vec::with_capacity(samples * m);
    let mut log_density = Vec::with_capacity(samples);
    let mut window_accepts = 0usize;
    let mut accepted = 0usize;
    let window = config.adapt_window.max(1);
    let total = config.burn_in + samples * thin;

    for it in 0..total {
        let mut mean = 0.0;
        for zn in z_new.iter_mut() {
            let eps: f64 = rng.sample(StandardNormal);
            *zn = eps;
            mean += eps;
        }
        mean /= m as f64;
        for (zn, zc) in z_new.iter_mut().zip(&z) {
            *zn = zc + scale * (*zn - mean);
        }
        let x_new = softmax(&z_new);
        let u: f64 = rng.random();
        let ok = if x_new.iter().all(|v| *v > 0.0) {
            let lp = density.log_phi_unchecked(&x_new);
            let lt = lp + log_jacobian(&x_new);
            if lt.is_finite() && metropolis_accept(lt - log_target, u) {
                z.copy_from_slice(&z_new);
                x = x_new;
                log_phi = lp;
                log_target = lt;
                true
            } else {
                false
            }
        } else {
            false
        };

        if it < config.burn_in {
            window_accepts += ok as usize;
            if (it + 1) % window == 0 {
                let rate = window_accepts as f64 / window as f64;
                if rate < TARGET_ACCEPTANCE.0 {
                    scale *= 0.7;
                } else if rate > TARGET_ACCEPTANCE.1 {
                    scale *= 1.4;
                }
                window_accepts = 0;
            }
        } else {
            accepted += ok as usize;
            if (it - config.burn_in + 1) % thin == 0 {
                points.extend_from_slice(&x);
                log_density.push(log_phi);
            }
        }
    }

    let kept = log_density.len();
    let ess = (0..m)
        .map(|e| {
            let col: Vec<f64> = (0..kept).map(|i| points[i * m + e]).collect();
            effective_sample_size(&col)
        })
        .fold(f64::INFINITY, f64::min);
    EnvironmentSample {
        dim: m,
        points,
        log_density,
        diagnostics: SamplerDiagnostics {
            acceptance_rate: accepted as f64 / (samples * thin) as f64,
            step_scale: scale,
            effective_sample_size: if ess.is_finite() { ess } else { kept as f64 },
            iterations: total,
        },
    }
}

fn softmax(z: &[f64]) -> Vec<f64> {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = z.iter().map(|v| (v - max).exp()).collect();
    let s: f64 = out.iter().sum();
    for v in &mut out {
        *v /= s;
    }
    out
}

fn log_jacobian(x: &[f64]) -> f64 {
    x.iter().map(|v| v.ln()).sum()
}
