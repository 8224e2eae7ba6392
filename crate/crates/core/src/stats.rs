//! Streaming moments, Monte Carlo error estimates and small fits.

use serde::Serialize;

/// Welford accumulator; mergeable, so independent runs can be pooled in any
/// grouping.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningMoments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningMoments {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&self, other: &Self) -> Self {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let n = self.count + other.count;
        let d = other.mean - self.mean;
        let mean = self.mean + d * other.count as f64 / n as f64;
        let m2 = self.m2 + other.m2 + d * d * (self.count as f64 * other.count as f64) / n as f64;
        RunningMoments { count: n, mean, m2 }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance (zero with fewer than two points).
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    /// Standard error of the mean, assuming independent draws.
    pub fn standard_error(&self) -> f64 {
        if self.count == 0 {
            return f64::INFINITY;
        }
        (self.variance() / self.count as f64).sqrt()
    }
}

impl FromIterator<f64> for RunningMoments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = RunningMoments::new();
        for x in iter {
            m.push(x);
        }
        m
    }
}

/// Value with a Monte Carlo standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub standard_error: f64,
}

impl Estimate {
    /// `|a - b| <= k * sqrt(se_a^2 + se_b^2)`.
    pub fn agrees_with(&self, other: &Estimate, k: f64) -> bool {
        (self.value - other.value).abs()
            <= k * (self.standard_error.powi(2) + other.standard_error.powi(2)).sqrt()
    }

    pub fn z_score(&self, other: &Estimate) -> f64 {
        (self.value - other.value)
            / (self.standard_error.powi(2) + other.standard_error.powi(2)).sqrt()
    }
}

/// Mean of a (possibly autocorrelated) series with a batch-means standard
/// error. `batches = None` treats the draws as independent.
pub fn mean_estimate(series: &[f64], batches: Option<usize>) -> Estimate {
    let all: RunningMoments = series.iter().copied().collect();
    let se = match batches {
        None => all.standard_error(),
        Some(b) => batch_means_se(series, b),
    };
    Estimate {
        value: all.mean(),
        standard_error: se,
    }
}

/// Batch-means standard error of the mean of `series`.
pub fn batch_means_se(series: &[f64], batches: usize) -> f64 {
    let batches = batches.max(2);
    let len = series.len() / batches;
    if len == 0 {
        let m: RunningMoments = series.iter().copied().collect();
        return m.standard_error();
    }
    let means: RunningMoments = series
        .chunks_exact(len)
        .take(batches)
        .map(|c| c.iter().sum::<f64>() / len as f64)
        .collect();
    means.standard_error()
}

/// Effective sample size from the initial positive sequence of
/// autocorrelations.
pub fn effective_sample_size(series: &[f64]) -> f64 {
    let n = series.len();
    if n < 4 {
        return n as f64;
    }
    let m: RunningMoments = series.iter().copied().collect();
    let mean = m.mean();
    let var = series.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
    if var == 0.0 {
        return n as f64;
    }
    let rho = |lag: usize| -> f64 {
        series[..n - lag]
            .iter()
            .zip(&series[lag..])
            .map(|(a, b)| (a - mean) * (b - mean))
            .sum::<f64>()
            / (n as f64 * var)
    };
    let mut sum = 0.0;
    let mut lag = 1;
    while lag + 1 < n {
        let pair = rho(lag) + rho(lag + 1);
        if pair <= 0.0 {
            break;
        }
        sum += pair;
        lag += 2;
    }
    let tau = 1.0 + 2.0 * sum;
    (n as f64 / tau).min(n as f64)
}

/// Mean vector and covariance matrix of vector-valued draws, each with a
/// standard error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSummary {
    pub mean: Vec<Estimate>,
    /// Row-major `d x d`.
    pub covariance: Vec<Estimate>,
    pub dim: usize,
}

/// Moments of rows of `samples` (row-major, `dim` columns). Covariance
/// entries are means of centered products, so their errors come from the
/// same batch-means machinery.
pub fn moment_summary(samples: &[f64], dim: usize, batches: Option<usize>) -> MomentSummary {
    let n = samples.len() / dim;
    let mean: Vec<Estimate> = (0..dim)
        .map(|j| {
            let col: Vec<f64> = (0..n).map(|i| samples[i * dim + j]).collect();
            mean_estimate(&col, batches)
        })
        .collect();
    let mut covariance = Vec::with_capacity(dim * dim);
    for j in 0..dim {
        for k in 0..dim {
            let prod: Vec<f64> = (0..n)
                .map(|i| {
                    (samples[i * dim + j] - mean[j].value) * (samples[i * dim + k] - mean[k].value)
                })
                .collect();
            let mut est = mean_estimate(&prod, batches);
            est.value *= n as f64 / (n as f64 - 1.0);
            covariance.push(est);
        }
    }
    MomentSummary {
        mean,
        covariance,
        dim,
    }
}

/// Ordinary least-squares line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

impl LinearFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Least-squares fit of `ys` on `xs`; `None` with fewer than two distinct
/// abscissae.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return None;
    }
    let mx = xs[..n].iter().sum::<f64>() / n as f64;
    let my = ys[..n].iter().sum::<f64>() / n as f64;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs[..n].iter().zip(&ys[..n]) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Some(LinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
        points: n,
    })
}

/// Gini coefficient of nonnegative values (0 = perfectly even).
pub fn gini(values: &[f64]) -> f64 {
    let n = values.len();
    if n == 0 {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let total: f64 = v.iter().sum();
    if total == 0.0 {
        return 0.0;
    }
    let weighted: f64 = v
        .iter()
        .enumerate()
        .map(|(i, x)| (2.0 * (i as f64 + 1.0) - n as f64 - 1.0) * x)
        .sum();
    weighted / (n as f64 * total)
}
