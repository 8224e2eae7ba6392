//! The limiting density of the normalized edge occupation fractions and its
//! joint extension with currents and last-exit trees.
//!
//! Everything here is unnormalized: comparisons are ratios, normalized
//! Monte Carlo expectations, or go through [`estimate_normalizer`].

mod joint;
mod mcmc;
mod normalizer;

pub use joint::{sample_joint_given_x, JointSampler};
pub use mcmc::{
    mcmc_sample, metropolis_accept, EnvironmentSample, SamplerConfig, SamplerDiagnostics,
    TARGET_ACCEPTANCE,
};
pub use normalizer::{estimate_normalizer, NormalizerEstimate, MIN_EFFECTIVE_SAMPLES};

use crate::error::{Error, Result};
use crate::graph::{vertex_weights, Graph, SIMPLEX_TOL};
use crate::homology::{self, det_in_basis, CycleBasis, SpanningTree};
use crate::stats::{mean_estimate, Estimate};

/// Tolerance for `s · y = 0`.
pub const CURRENT_TOL: f64 = 1e-12;

/// `phi_{v0,a}` up to its normalizing constant, with the cycle basis and
/// vertex totals precomputed.
#[derive(Debug, Clone)]
pub struct LimitDensity<'g> {
    graph: &'g Graph,
    start: usize,
    a: Vec<f64>,
    a_vertex: Vec<f64>,
    basis: CycleBasis,
}

impl<'g> LimitDensity<'g> {
    pub fn new(g: &'g Graph, v0: usize, a: &[f64]) -> Result<Self> {
        if v0 >= g.vertex_count() {
            return Err(Error::UnknownVertex(v0.to_string()));
        }
        if a.len() != g.edge_count() {
            return Err(Error::LengthMismatch {
                expected: g.edge_count(),
                got: a.len(),
            });
        }
        if let Some((e, v)) = a
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::NonPositiveWeight {
                edge: e,
                value: v.to_string(),
            });
        }
        let basis = CycleBasis::fundamental(g)?;
        Ok(LimitDensity {
            graph: g,
            start: v0,
            a: a.to_vec(),
            a_vertex: vertex_weights(g, a),
            basis,
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn weights(&self) -> &[f64] {
        &self.a
    }

    pub fn basis(&self) -> &CycleBasis {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.a.len()
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.a.len() {
            return Err(Error::LengthMismatch {
                expected: self.a.len(),
                got: x.len(),
            });
        }
        if let Some((e, v)) = x
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::OutsideSimplex(format!("x[{e}] = {v}")));
        }
        let s: f64 = x.iter().sum();
        if (s - 1.0).abs() > SIMPLEX_TOL * x.len() as f64 {
            return Err(Error::OutsideSimplex(format!("entries sum to {s}")));
        }
        Ok(())
    }

    /// `-(a_{v0}/2) log x_{v0} - sum_{v != v0} ((a_v+1)/2) log x_v`.
    fn vertex_term(&self, x: &[f64]) -> f64 {
        let xv = vertex_weights(self.graph, x);
        xv.iter()
            .zip(&self.a_vertex)
            .enumerate()
            .map(|(v, (xv, av))| {
                let p = if v == self.start {
                    av / 2.0
                } else {
                    (av + 1.0) / 2.0
                };
                -p * xv.ln()
            })
            .sum()
    }

    fn edge_term(&self, x: &[f64], shift: f64) -> f64 {
        x.iter()
            .zip(&self.a)
            .map(|(xe, ae)| (ae - shift) * xe.ln())
            .sum()
    }

    /// Determinant form.
    pub fn log_phi(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        Ok(self.log_phi_unchecked(x))
    }

    pub(crate) fn log_phi_unchecked(&self, x: &[f64]) -> f64 {
        self.edge_term(x, 0.5) + self.vertex_term(x) + 0.5 * det_in_basis(&self.basis, x).ln()
    }

    /// Spanning-tree form; agrees with [`Self::log_phi`] pointwise.
    pub fn log_phi_tree_form(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        let poly = homology::spanning_tree_polynomial(self.graph, x)?;
        Ok(self.edge_term(x, 1.0) + self.vertex_term(x) + 0.5 * poly.ln())
    }

    /// Joint density of weights, current and tree.
    pub fn log_joint(&self, x: &[f64], y: &[f64], tree: &SpanningTree) -> Result<f64> {
        self.check_point(x)?;
        if y.len() != x.len() {
            return Err(Error::LengthMismatch {
                expected: x.len(),
                got: y.len(),
            });
        }
        if !tree.is_spanning(self.graph) {
            return Err(Error::NotSpanning);
        }
        let div = self.graph.incidence().apply(y);
        if let Some((v, d)) = div.iter().enumerate().find(|(_, d)| d.abs() > CURRENT_TOL) {
            return Err(Error::NotInCycleSpace {
                vertex: self.graph.name(v).to_string(),
                imbalance: *d,
            });
        }
        let tree_term: f64 = tree.edges().iter().map(|&e| x[e].ln()).sum();
        Ok(self.edge_term(x, 1.5) + self.vertex_term(x) + tree_term
            - 0.5 * homology::quadratic_form(x, y)?)
    }
}

/// `log phi` (determinant form) without the normalizing constant.
pub fn log_phi_unnorm(g: &Graph, v0: usize, a: &[f64], x: &[f64]) -> Result<f64> {
    LimitDensity::new(g, v0, a)?.log_phi(x)
}

/// `log phi` (spanning-tree form) without the normalizing constant.
pub fn log_phi_tree_form(g: &Graph, v0: usize, a: &[f64], x: &[f64]) -> Result<f64> {
    LimitDensity::new(g, v0, a)?.log_phi_tree_form(x)
}

/// `log Phi(x, y, T)` without the normalizing constant.
pub fn log_joint_unnorm(
    g: &Graph,
    v0: usize,
    a: &[f64],
    x: &[f64],
    y: &[f64],
    tree: &SpanningTree,
) -> Result<f64> {
    LimitDensity::new(g, v0, a)?.log_joint(x, y, tree)
}

/// Probability of `path` under the reversible chain with conductances `x`,
/// started at `v0`: `prod x_{v_i v_{i+1}} / x_{v_i}`. Zero if the path does
/// not start at `v0` or uses a non-edge.
pub fn markov_path_probability(g: &Graph, x: &[f64], v0: usize, path: &[usize]) -> Result<f64> {
    if x.len() != g.edge_count() {
        return Err(Error::LengthMismatch {
            expected: g.edge_count(),
            got: x.len(),
        });
    }
    if let Some((e, v)) = x
        .iter()
        .enumerate()
        .find(|(_, v)| !(v.is_finite() && **v > 0.0))
    {
        return Err(Error::NonPositiveWeight {
            edge: e,
            value: v.to_string(),
        });
    }
    if let Some(&v) = path.iter().find(|&&v| v >= g.vertex_count()) {
        return Err(Error::UnknownVertex(v.to_string()));
    }
    if path.first() != Some(&v0) {
        return Ok(0.0);
    }
    Ok(markov_path_probability_unchecked(g, x, path))
}

fn markov_path_probability_unchecked(g: &Graph, x: &[f64], path: &[usize]) -> f64 {
    let mut p = 1.0;
    for w in path.windows(2) {
        let Some(e) = g.edge_between(w[0], w[1]) else {
            return 0.0;
        };
        let xv: f64 = g.incident(w[0]).iter().map(|inc| x[inc.edge]).sum();
        p *= x[e] / xv;
    }
    p
}

/// Monte Carlo average of [`markov_path_probability`] over environment
/// draws; the error uses batch means to account for chain autocorrelation.
pub fn mixture_path_probability(
    g: &Graph,
    v0: usize,
    path: &[usize],
    sample: &EnvironmentSample,
) -> Result<Estimate> {
    if sample.is_empty() {
        return Err(Error::InsufficientData("empty environment sample".into()));
    }
    if sample.dimension() != g.edge_count() {
        return Err(Error::LengthMismatch {
            expected: g.edge_count(),
            got: sample.dimension(),
        });
    }
    if let Some(&v) = path.iter().find(|&&v| v >= g.vertex_count()) {
        return Err(Error::UnknownVertex(v.to_string()));
    }
    if path.first() != Some(&v0) {
        return Ok(Estimate {
            value: 0.0,
            standard_error: 0.0,
        });
    }
    let values: Vec<f64> = sample
        .iter()
        .map(|x| markov_path_probability_unchecked(g, x, path))
        .collect();
    Ok(mean_estimate(&values, Some(batch_count(values.len()))))
}

/// Number of batches for batch-means errors on a chain of length `n`.
pub(crate) fn batch_count(n: usize) -> usize {
    ((n as f64).sqrt() as usize).clamp(2, 1000)
}
