//! Exact path probabilities under the reinforced-walk law `P_{v0,a}`.
//!
//! Two independent routes are provided:
//!
//! * [`ExactLaw`] replays the walk and multiplies the one-step ratios
//!   `w_t(e) / sum_{e' ∋ X_t} w_t(e')`. This is the ground truth.
//! * [`path_probability`] evaluates a closed form that depends on the path
//!   only through its start, its undirected edge counts and the number of
//!   departures from each vertex:
//!
//!   `P(pi) = prod_e a_e (a_e+1) ... (a_e+k_e-1) / prod_v prod_{j=1}^{n_v} (a_v + 2(j-1) + [v != v0])`
//!
//!   Between two departures from `v` the walk must return, adding two
//!   crossings at `v`; a vertex other than the start is first entered
//!   through one of its edges.

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, rising, ExactInt};
use crate::graph::Graph;
use crate::walk::Trajectory;

/// Incremental exact evaluator of the reinforced-walk law. Supports undoing
/// steps, which makes depth-first enumeration of path families cheap.
#[derive(Debug, Clone)]
pub struct ExactLaw<'g, T: ExactInt> {
    graph: &'g Graph,
    start: usize,
    position: usize,
    weights: Vec<Ratio<T>>,
    totals: Vec<Ratio<T>>,
    history: Vec<(usize, usize)>,
}

impl<'g, T: ExactInt> ExactLaw<'g, T> {
    pub fn new(g: &'g Graph, v0: usize, a: &[Ratio<T>]) -> Result<Self> {
        check_inputs(g, v0, a)?;
        let mut totals = vec![Ratio::zero(); g.vertex_count()];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            totals[u] = totals[u].clone() + a[e].clone();
            totals[v] = totals[v].clone() + a[e].clone();
        }
        Ok(ExactLaw {
            graph: g,
            start: v0,
            position: v0,
            weights: a.to_vec(),
            totals,
            history: Vec::new(),
        })
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn position(&self) -> usize {
        self.position
    }

    pub fn time(&self) -> usize {
        self.history.len()
    }

    /// Current weights `w_t(e)`.
    pub fn weights(&self) -> &[Ratio<T>] {
        &self.weights
    }

    /// Probability that the next step goes to `to`; zero for non-neighbors.
    pub fn step_probability(&self, to: usize) -> Ratio<T> {
        match self.graph.edge_between(self.position, to) {
            Some(e) => self.weights[e].clone() / self.totals[self.position].clone(),
            None => Ratio::zero(),
        }
    }

    /// Takes the step to `to`, returning its conditional probability.
    pub fn advance(&mut self, to: usize) -> Result<Ratio<T>> {
        let from = self.position;
        let e = self
            .graph
            .edge_between(from, to)
            .ok_or_else(|| Error::NotAnEdge {
                from: self.graph.name(from).to_string(),
                to: self.graph.name(to).to_string(),
            })?;
        let p = self.weights[e].clone() / self.totals[from].clone();
        self.weights[e] = self.weights[e].clone() + Ratio::one();
        self.totals[from] = self.totals[from].clone() + Ratio::one();
        self.totals[to] = self.totals[to].clone() + Ratio::one();
        self.position = to;
        self.history.push((from, e));
        Ok(p)
    }

    /// Undoes the last step; returns the vertex moved back to.
    pub fn retreat(&mut self) -> Option<usize> {
        let (from, e) = self.history.pop()?;
        let to = self.position;
        self.weights[e] = self.weights[e].clone() - Ratio::one();
        self.totals[from] = self.totals[from].clone() - Ratio::one();
        self.totals[to] = self.totals[to].clone() - Ratio::one();
        self.position = from;
        Some(from)
    }
}

fn check_inputs<T: ExactInt>(g: &Graph, v0: usize, a: &[Ratio<T>]) -> Result<()> {
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
    Ok(())
}

fn check_start(g: &Graph, v0: usize, path: &Trajectory) -> Result<()> {
    if path.start() != v0 {
        return Err(Error::StartMismatch {
            expected: g.name(v0).to_string(),
            got: g.name(path.start()).to_string(),
        });
    }
    Ok(())
}

/// Product of the one-step ratios along `path`.
pub fn sequential_path_probability<T: ExactInt>(
    g: &Graph,
    v0: usize,
    a: &[Ratio<T>],
    path: &Trajectory,
) -> Result<Ratio<T>> {
    let mut law = ExactLaw::new(g, v0, a)?;
    check_start(g, v0, path)?;
    let mut p = Ratio::one();
    for &v in &path.vertices()[1..] {
        p = p * law.advance(v)?;
    }
    Ok(p)
}

/// Closed-form path probability from the path's sufficient statistics.
pub fn path_probability<T: ExactInt>(
    g: &Graph,
    v0: usize,
    a: &[Ratio<T>],
    path: &Trajectory,
) -> Result<Ratio<T>> {
    check_inputs(g, v0, a)?;
    check_start(g, v0, path)?;
    Ok(probability_from_counts(
        g,
        v0,
        a,
        &path.edge_counts(g),
        &path.departures(g),
    ))
}

/// Closed form given edge crossing counts `k_e` and departures `n_v`.
pub fn probability_from_counts<T: ExactInt>(
    g: &Graph,
    v0: usize,
    a: &[Ratio<T>],
    edge_counts: &[u64],
    departures: &[u64],
) -> Ratio<T> {
    let mut num = Ratio::<T>::one();
    for (ae, &k) in a.iter().zip(edge_counts) {
        num = num * rising(ae, k);
    }
    let two = int::<T>(2);
    let mut den = Ratio::<T>::one();
    for (v, &n) in departures.iter().enumerate() {
        if n == 0 {
            continue;
        }
        let mut base = g
            .incident(v)
            .iter()
            .fold(Ratio::<T>::zero(), |acc, inc| acc + a[inc.edge].clone());
        if v != v0 {
            base = base + Ratio::one();
        }
        let mut term = base;
        for _ in 0..n {
            den = den * term.clone();
            term = term + two.clone();
        }
    }
    num / den
}

/// Conditional one-step probability as a function of local times only:
/// `(a_e + k_t(e)) / (a_v + 2 k_t(v) - 2 + [v != v0])`, where `k_t(v)`
/// counts visits to the current vertex `v` at times `0..=t`.
pub fn conditional_step_probability<T: ExactInt>(
    a_edge: &Ratio<T>,
    edge_count: u64,
    a_vertex: &Ratio<T>,
    visits: u64,
    is_start: bool,
) -> Ratio<T> {
    debug_assert!(visits >= 1);
    let num = a_edge.clone() + int::<T>(edge_count);
    let mut den = a_vertex.clone() + int::<T>(2 * visits) - int::<T>(2);
    if !is_start {
        den = den + Ratio::one();
    }
    num / den
}
