//! The linearly edge-reinforced random walk on a finite graph.
//!
//! Every crossing of an edge increases its weight by one; from the current
//! vertex the walker picks an incident edge with probability proportional to
//! its current weight.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::exact::{to_f64, ExactInt};
use crate::graph::Graph;
use crate::homology::SpanningTree;

/// Random source used by every simulation in the crate.
pub type SimRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws an index with probability proportional to `weights`, scanning in
/// order. Consumes exactly one `f64` from the generator.
#[inline]
pub fn sample_weighted<R: Rng + ?Sized>(rng: &mut R, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if u < *w {
            return i;
        }
        u -= w;
    }
    weights.len() - 1
}

/// Strictly positive initial edge weights `a_e`, kept exactly and as `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialWeights<T: ExactInt = BigInt> {
    exact: Vec<Ratio<T>>,
    float: Vec<f64>,
}

impl<T: ExactInt> InitialWeights<T> {
    pub fn new(exact: Vec<Ratio<T>>) -> Result<Self> {
        if let Some((e, v)) = exact.iter().enumerate().find(|(_, v)| **v <= Ratio::zero()) {
            return Err(Error::NonPositiveWeight {
                edge: e,
                value: format!("{v}"),
            });
        }
        let float = exact.iter().map(to_f64).collect();
        Ok(InitialWeights { exact, float })
    }

    pub fn uniform(edges: usize, value: Ratio<T>) -> Result<Self> {
        Self::new(vec![value; edges])
    }

    /// Checks that there is one weight per edge of `g`.
    pub fn for_graph(self, g: &Graph) -> Result<Self> {
        if self.exact.len() != g.edge_count() {
            return Err(Error::LengthMismatch {
                expected: g.edge_count(),
                got: self.exact.len(),
            });
        }
        Ok(self)
    }

    pub fn exact(&self) -> &[Ratio<T>] {
        &self.exact
    }

    pub fn as_f64(&self) -> &[f64] {
        &self.float
    }

    pub fn len(&self) -> usize {
        self.exact.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exact.is_empty()
    }

    /// `a_v = sum_{e ∋ v} a_e`.
    pub fn vertex_total(&self, g: &Graph, v: usize) -> Ratio<T> {
        g.incident(v)
            .iter()
            .fold(Ratio::zero(), |acc, inc| acc + self.exact[inc.edge].clone())
    }
}

/// Live state of a reinforced walk.
#[derive(Debug, Clone)]
pub struct WalkState<'g> {
    graph: &'g Graph,
    base: Vec<f64>,
    start: usize,
    position: usize,
    time: u64,
    edge_counts: Vec<u64>,
    visits: Vec<u64>,
}

impl<'g> WalkState<'g> {
    /// Walk at time 0 sitting at `v0` with weights `a`.
    pub fn new<T: ExactInt>(g: &'g Graph, v0: usize, a: &InitialWeights<T>) -> Result<Self> {
        Self::with_float_weights(g, v0, a.as_f64().to_vec())
    }

    pub fn with_float_weights(g: &'g Graph, v0: usize, base: Vec<f64>) -> Result<Self> {
        if v0 >= g.vertex_count() {
            return Err(Error::UnknownVertex(v0.to_string()));
        }
        if base.len() != g.edge_count() {
            return Err(Error::LengthMismatch {
                expected: g.edge_count(),
                got: base.len(),
            });
        }
        if let Some((e, v)) = base.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
            return Err(Error::NonPositiveWeight {
                edge: e,
                value: v.to_string(),
            });
        }
        let mut visits = vec![0; g.vertex_count()];
        visits[v0] = 1;
        Ok(WalkState {
            graph: g,
            base,
            start: v0,
            position: v0,
            time: 0,
            edge_counts: vec![0; g.edge_count()],
            visits,
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn position(&self) -> usize {
        self.position
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    /// `w_t(e) = a_e + k_t(e)`.
    #[inline]
    pub fn weight(&self, e: usize) -> f64 {
        self.base[e] + self.edge_counts[e] as f64
    }

    /// `k_t(e)`: crossings of each edge so far.
    pub fn edge_counts(&self) -> &[u64] {
        &self.edge_counts
    }

    /// `k_t(v)`: visits to each vertex at times `0..=t`.
    pub fn visits(&self) -> &[u64] {
        &self.visits
    }

    /// One-step law out of the current vertex, as `(neighbor, probability)`
    /// in adjacency order.
    pub fn transition_probabilities(&self) -> Vec<(usize, f64)> {
        let inc = self.graph.incident(self.position);
        let total: f64 = inc.iter().map(|i| self.weight(i.edge)).sum();
        inc.iter()
            .map(|i| (i.neighbor, self.weight(i.edge) / total))
            .collect()
    }

    /// Moves to a neighbor drawn proportionally to the incident weights,
    /// reinforces the traversed edge and returns the new vertex.
    #[inline]
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<usize> {
        let inc = self.graph.incident(self.position);
        if inc.is_empty() {
            return Err(Error::Stuck(self.graph.name(self.position).to_string()));
        }
        let weights: SmallVec<[f64; 8]> = inc.iter().map(|i| self.weight(i.edge)).collect();
        let pick = inc[sample_weighted(rng, &weights)];
        self.edge_counts[pick.edge] += 1;
        self.position = pick.neighbor;
        self.visits[pick.neighbor] += 1;
        self.time += 1;
        Ok(pick.neighbor)
    }

    /// Advances `steps` times without recording the path.
    pub fn advance<R: Rng + ?Sized>(&mut self, steps: u64, rng: &mut R) -> Result<()> {
        for _ in 0..steps {
            self.step(rng)?;
        }
        Ok(())
    }

    /// Advances `steps` times and returns the path walked, beginning at the
    /// position held before the call.
    pub fn run<R: Rng + ?Sized>(&mut self, steps: usize, rng: &mut R) -> Result<Trajectory> {
        let mut vertices = Vec::with_capacity(steps + 1);
        let mut edges = Vec::with_capacity(steps);
        vertices.push(self.position);
        for _ in 0..steps {
            let from = self.position;
            let to = self.step(rng)?;
            // step() just incremented this edge; recover its index cheaply
            let e = self
                .graph
                .incident(from)
                .iter()
                .find(|i| i.neighbor == to)
                .map(|i| i.edge)
                .unwrap();
            vertices.push(to);
            edges.push(e);
        }
        Ok(Trajectory { vertices, edges })
    }
}

/// A recorded path `(X_0, ..., X_t)` with the edge crossed at each step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

impl Trajectory {
    /// Validates that consecutive vertices are adjacent in `g`.
    pub fn new(g: &Graph, vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidArgument(
                "a path has at least one vertex".into(),
            ));
        }
        if let Some(&v) = vertices.iter().find(|&&v| v >= g.vertex_count()) {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        let edges = vertices
            .windows(2)
            .map(|w| {
                g.edge_between(w[0], w[1]).ok_or_else(|| Error::NotAnEdge {
                    from: g.name(w[0]).to_string(),
                    to: g.name(w[1]).to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Trajectory { vertices, edges })
    }

    pub fn from_names<S: AsRef<str>>(g: &Graph, names: &[S]) -> Result<Self> {
        Self::new(g, g.resolve_path(names)?)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Edge crossed at each step.
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    /// Number of steps `t`.
    pub fn steps(&self) -> usize {
        self.edges.len()
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    /// `k_t(e)` for each edge.
    pub fn edge_counts(&self, g: &Graph) -> Vec<u64> {
        let mut k = vec![0; g.edge_count()];
        for &e in &self.edges {
            k[e] += 1;
        }
        k
    }

    /// Number of departures from each vertex (visits at times `0..t`).
    pub fn departures(&self, g: &Graph) -> Vec<u64> {
        let mut d = vec![0; g.vertex_count()];
        for &v in &self.vertices[..self.vertices.len() - 1] {
            d[v] += 1;
        }
        d
    }

    /// `|{i >= 1 : X_i = v}|`.
    pub fn return_count(&self, v: usize) -> usize {
        self.vertices[1..].iter().filter(|&&x| x == v).count()
    }

    /// Occupation fractions `alpha_t(e) = k_t(e) / t`.
    pub fn occupation_fractions(&self, g: &Graph) -> Result<Occupation> {
        if self.steps() == 0 {
            return Err(Error::EmptyPath("occupation fraction"));
        }
        Ok(Occupation {
            counts: self.edge_counts(g),
            time: self.steps() as u64,
        })
    }

    /// Signed crossing counts `[pi]` in counting direction and the rescaled
    /// current `beta_t = [pi] / sqrt(t)`.
    pub fn chain_vector(&self, g: &Graph) -> Result<(Vec<i64>, Vec<f64>)> {
        if self.steps() == 0 {
            return Err(Error::EmptyPath("chain vector"));
        }
        let mut chain = vec![0i64; g.edge_count()];
        for (i, &e) in self.edges.iter().enumerate() {
            let (tail, _) = g.endpoints(e);
            chain[e] += if self.vertices[i] == tail { 1 } else { -1 };
        }
        let scale = (self.steps() as f64).sqrt();
        let beta = chain.iter().map(|&c| c as f64 / scale).collect();
        Ok((chain, beta))
    }

    /// Edges of final departure from every visited vertex other than the
    /// current position. Always acyclic; spanning once every vertex has
    /// been visited.
    pub fn last_exit_tree(&self, g: &Graph) -> Result<SpanningTree> {
        if self.steps() == 0 {
            return Err(Error::EmptyPath("last-exit tree"));
        }
        let mut last = vec![None; g.vertex_count()];
        for (i, &e) in self.edges.iter().enumerate() {
            last[self.vertices[i]] = Some(e);
        }
        last[self.end()] = None;
        Ok(SpanningTree::new(last.into_iter().flatten().collect()))
    }
}

/// Crossing counts together with the elapsed time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Occupation {
    pub counts: Vec<u64>,
    pub time: u64,
}

impl Occupation {
    pub fn fractions(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&k| k as f64 / self.time as f64)
            .collect()
    }

    pub fn exact(&self) -> Vec<Ratio<BigInt>> {
        self.counts
            .iter()
            .map(|&k| Ratio::new(BigInt::from(k), BigInt::from(self.time)))
            .collect()
    }
}
