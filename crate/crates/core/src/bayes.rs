//! Conjugate analysis of reversible Markov chains and two standard
//! competitors.
//!
//! The reversible model's prior predictive is the reinforced-walk law, so its
//! marginal likelihood is an exact path probability, and conditioning on data
//! simply moves the start and adds the crossing counts to the weights. The
//! i.i.d. and full-Markov competitors use Dirichlet priors. All three
//! condition on the first observation.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::exact::{int, to_f64, ExactInt};
use crate::graph::Graph;
use crate::law::probability_from_counts;
use crate::walk::Trajectory;

/// Prior `(v0, a)` on reversible chains over `graph`.
#[derive(Debug, Clone)]
pub struct PriorParams<'g, T: ExactInt = BigInt> {
    graph: &'g Graph,
    start: usize,
    a: Vec<Ratio<T>>,
}

impl<'g, T: ExactInt> PriorParams<'g, T> {
    pub fn new(g: &'g Graph, v0: usize, a: Vec<Ratio<T>>) -> Result<Self> {
        if v0 >= g.vertex_count() {
            return Err(Error::UnknownVertex(v0.to_string()));
        }
        if a.len() != g.edge_count() {
            return Err(Error::LengthMismatch {
                expected: g.edge_count(),
                got: a.len(),
            });
        }
        if let Some((e, v)) = a.iter().enumerate().find(|(_, v)| **v <= Ratio::zero()) {
            return Err(Error::NonPositiveWeight {
                edge: e,
                value: format!("{v}"),
            });
        }
        Ok(PriorParams {
            graph: g,
            start: v0,
            a,
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn weights(&self) -> &[Ratio<T>] {
        &self.a
    }

    fn check_data(&self, data: &Trajectory) -> Result<()> {
        if data.start() != self.start {
            return Err(Error::StartMismatch {
                expected: self.graph.name(self.start).to_string(),
                got: self.graph.name(data.start()).to_string(),
            });
        }
        Ok(())
    }
}

impl<T: ExactInt> PartialEq for PriorParams<'_, T> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.graph, other.graph) && self.start == other.start && self.a == other.a
    }
}

/// Raw observations, one symbol per entry.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ObservedSequence {
    symbols: Vec<String>,
}

impl ObservedSequence {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Self {
        ObservedSequence {
            symbols: symbols.into_iter().map(Into::into).collect(),
        }
    }

    /// One symbol per non-blank line; surrounding whitespace is ignored.
    pub fn parse(text: &str) -> Self {
        Self::new(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// The sequence as a path in `g`; consecutive symbols must be adjacent.
    pub fn resolve(&self, g: &Graph) -> Result<Trajectory> {
        Trajectory::from_names(g, &self.symbols)
    }
}

/// Posterior after observing `data`: start at the last state, weights
/// `a_e + k_t(e)`.
pub fn posterior_update<'g, T: ExactInt>(
    prior: &PriorParams<'g, T>,
    data: &Trajectory,
) -> Result<PriorParams<'g, T>> {
    prior.check_data(data)?;
    let k = data.edge_counts(prior.graph);
    let a = prior
        .a
        .iter()
        .zip(&k)
        .map(|(ae, &ke)| ae.clone() + int::<T>(ke))
        .collect();
    Ok(PriorParams {
        graph: prior.graph,
        start: data.end(),
        a,
    })
}

/// Probability of `data` under the reversible model; equals the
/// reinforced-walk path probability.
pub fn marginal_likelihood<T: ExactInt>(
    prior: &PriorParams<'_, T>,
    data: &Trajectory,
) -> Result<Ratio<T>> {
    prior.check_data(data)?;
    let g = prior.graph;
    Ok(probability_from_counts(
        g,
        prior.start,
        &prior.a,
        &data.edge_counts(g),
        &data.departures(g),
    ))
}

/// `ln prod_{j<n} (b + 2j) = n ln 2 + lnGamma(b/2 + n) - lnGamma(b/2)`.
fn ln_step2_rising(b: f64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    n as f64 * std::f64::consts::LN_2 + ln_gamma(b / 2.0 + n as f64) - ln_gamma(b / 2.0)
}

fn ln_rising(a: f64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    ln_gamma(a + n as f64) - ln_gamma(a)
}

/// Log of [`marginal_likelihood`] in floating point, for long sequences.
pub fn log_marginal_likelihood<T: ExactInt>(
    prior: &PriorParams<'_, T>,
    data: &Trajectory,
) -> Result<f64> {
    prior.check_data(data)?;
    let g = prior.graph;
    let a: Vec<f64> = prior.a.iter().map(to_f64).collect();
    let k = data.edge_counts(g);
    let n = data.departures(g);
    let mut acc: f64 = a.iter().zip(&k).map(|(&ae, &ke)| ln_rising(ae, ke)).sum();
    for (v, &nv) in n.iter().enumerate() {
        let mut b: f64 = g.incident(v).iter().map(|inc| a[inc.edge]).sum();
        if v != prior.start {
            b += 1.0;
        }
        acc -= ln_step2_rising(b, nv);
    }
    Ok(acc)
}

fn state_index(states: &[String], data: &ObservedSequence) -> Result<Vec<usize>> {
    let index: HashMap<&str, usize> = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    data.symbols
        .iter()
        .map(|s| {
            index
                .get(s.as_str())
                .copied()
                .ok_or_else(|| Error::UnknownState(s.clone()))
        })
        .collect()
}

fn check_dirichlet<T: ExactInt>(what: &str, alpha: &[Ratio<T>], expected: usize) -> Result<()> {
    if alpha.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            got: alpha.len(),
        });
    }
    if let Some(v) = alpha.iter().find(|v| **v <= Ratio::zero()) {
        return Err(Error::InvalidArgument(format!(
            "{what} parameters must be positive, got {v}"
        )));
    }
    Ok(())
}

/// Pólya sequence probability of `x_1, ..., x_t` under an i.i.d. model with
/// a `Dirichlet(alpha)` prior, given `x_0`.
pub fn iid_marginal_likelihood<T: ExactInt>(
    states: &[String],
    alpha: &[Ratio<T>],
    data: &ObservedSequence,
) -> Result<Ratio<T>> {
    check_dirichlet("Dirichlet", alpha, states.len())?;
    let idx = state_index(states, data)?;
    let mut counts = vec![0u64; states.len()];
    let total: Ratio<T> = alpha.iter().cloned().fold(Ratio::zero(), |a, b| a + b);
    let mut p = Ratio::one();
    for (i, &s) in idx.iter().enumerate().skip(1) {
        let num = alpha[s].clone() + int::<T>(counts[s]);
        let den = total.clone() + int::<T>(i as u64 - 1);
        p = p * num / den;
        counts[s] += 1;
    }
    Ok(p)
}

pub fn log_iid_marginal_likelihood(
    states: &[String],
    alpha: &[f64],
    data: &ObservedSequence,
) -> Result<f64> {
    if alpha.len() != states.len() {
        return Err(Error::LengthMismatch {
            expected: states.len(),
            got: alpha.len(),
        });
    }
    if alpha.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidArgument(
            "Dirichlet parameters must be positive".into(),
        ));
    }
    let idx = state_index(states, data)?;
    let mut counts = vec![0u64; states.len()];
    for &s in idx.iter().skip(1) {
        counts[s] += 1;
    }
    let t = idx.len().saturating_sub(1) as u64;
    let total: f64 = alpha.iter().sum();
    Ok(alpha
        .iter()
        .zip(&counts)
        .map(|(&a, &c)| ln_rising(a, c))
        .sum::<f64>()
        - ln_rising(total, t))
}

/// Symmetric row priors: `value` on every out-transition of every vertex.
pub fn symmetric_rows<T: ExactInt>(g: &Graph, value: Ratio<T>) -> Vec<Vec<Ratio<T>>> {
    (0..g.vertex_count())
        .map(|v| vec![value.clone(); g.degree(v)])
        .collect()
}

fn check_rows<T: ExactInt>(g: &Graph, rows: &[Vec<Ratio<T>>]) -> Result<()> {
    if rows.len() != g.vertex_count() {
        return Err(Error::LengthMismatch {
            expected: g.vertex_count(),
            got: rows.len(),
        });
    }
    for (v, row) in rows.iter().enumerate() {
        check_dirichlet("row Dirichlet", row, g.degree(v))?;
    }
    Ok(())
}

/// Position of the step `from -> to` in `from`'s incidence list.
fn slot(g: &Graph, from: usize, to: usize) -> usize {
    g.incident(from)
        .iter()
        .position(|inc| inc.neighbor == to)
        .expect("trajectory steps are edges")
}

/// Product over vertices of the Pólya sequence probability of the row's
/// out-transitions. `rows[v][i]` is the prior weight of the transition along
/// `g.incident(v)[i]`.
pub fn full_markov_marginal_likelihood<T: ExactInt>(
    g: &Graph,
    rows: &[Vec<Ratio<T>>],
    data: &Trajectory,
) -> Result<Ratio<T>> {
    check_rows(g, rows)?;
    let mut counts: Vec<Vec<u64>> = rows.iter().map(|r| vec![0; r.len()]).collect();
    let mut seen = vec![0u64; g.vertex_count()];
    let totals: Vec<Ratio<T>> = rows
        .iter()
        .map(|r| r.iter().cloned().fold(Ratio::zero(), |a, b| a + b))
        .collect();
    let mut p = Ratio::one();
    for w in data.vertices().windows(2) {
        let (v, j) = (w[0], slot(g, w[0], w[1]));
        p = p * (rows[v][j].clone() + int::<T>(counts[v][j]))
            / (totals[v].clone() + int::<T>(seen[v]));
        counts[v][j] += 1;
        seen[v] += 1;
    }
    Ok(p)
}

pub fn log_full_markov_marginal_likelihood(
    g: &Graph,
    rows: &[Vec<f64>],
    data: &Trajectory,
) -> Result<f64> {
    if rows.len() != g.vertex_count() {
        return Err(Error::LengthMismatch {
            expected: g.vertex_count(),
            got: rows.len(),
        });
    }
    for (v, row) in rows.iter().enumerate() {
        if row.len() != g.degree(v) {
            return Err(Error::LengthMismatch {
                expected: g.degree(v),
                got: row.len(),
            });
        }
        if row.iter().any(|x| !(*x > 0.0)) {
            return Err(Error::InvalidArgument(
                "row Dirichlet parameters must be positive".into(),
            ));
        }
    }
    let mut counts: Vec<Vec<u64>> = rows.iter().map(|r| vec![0; r.len()]).collect();
    for w in data.vertices().windows(2) {
        counts[w[0]][slot(g, w[0], w[1])] += 1;
    }
    let mut acc = 0.0;
    for (row, c) in rows.iter().zip(&counts) {
        let n: u64 = c.iter().sum();
        acc += row
            .iter()
            .zip(c)
            .map(|(&a, &k)| ln_rising(a, k))
            .sum::<f64>();
        acc -= ln_rising(row.iter().sum(), n);
    }
    Ok(acc)
}

/// `P(data | H0) / P(data | H1)` from log marginal likelihoods.
pub fn bayes_factor(log_ml_h0: f64, log_ml_h1: f64) -> f64 {
    (log_ml_h0 - log_ml_h1).exp()
}
