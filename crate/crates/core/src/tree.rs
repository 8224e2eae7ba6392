//! Reinforced walks on acyclic graphs as Pólya urns at the vertices and as a
//! random walk in an independent Dirichlet environment.
//!
//! On a tree every return to `v` crosses the edge just used a second time, so
//! each departure adds two balls to the color drawn. A vertex other than the
//! start is first entered through the edge toward the start, which carries
//! one extra crossing.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::exact::{int, to_f64, ExactInt};
use crate::graph::Graph;
use crate::walk::{sample_weighted, Trajectory};

pub fn check_acyclic(g: &Graph) -> bool {
    g.is_acyclic()
}

fn require_tree<T: ExactInt>(g: &Graph, v0: usize, a: &[Ratio<T>]) -> Result<()> {
    if !g.is_acyclic() {
        return Err(Error::Cyclic);
    }
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

/// Initial composition at each vertex, in incidence order: `a_e` per edge,
/// plus one on the edge toward `v0`.
fn initial_counts<T: ExactInt>(g: &Graph, v0: usize, a: &[Ratio<T>]) -> Vec<Vec<Ratio<T>>> {
    let (_, parent_edge) = g.bfs(v0);
    (0..g.vertex_count())
        .map(|v| {
            g.incident(v)
                .iter()
                .map(|inc| {
                    let c = a[inc.edge].clone();
                    if v != v0 && parent_edge[v] == Some(inc.edge) {
                        c + Ratio::one()
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect()
}

fn slot(g: &Graph, from: usize, to: usize) -> Result<usize> {
    g.incident(from)
        .iter()
        .position(|inc| inc.neighbor == to)
        .ok_or_else(|| Error::NotAnEdge {
            from: g.name(from).to_string(),
            to: g.name(to).to_string(),
        })
}

/// Urn contents at every vertex; colors are the incident edges in incidence
/// order.
#[derive(Debug, Clone)]
pub struct UrnState<'g, T: ExactInt = BigInt> {
    graph: &'g Graph,
    start: usize,
    counts: Vec<Vec<Ratio<T>>>,
    draws: Vec<u64>,
}

/// Balls added per draw.
pub const REINFORCEMENT: u64 = 2;

pub fn urn_init<'g, T: ExactInt>(
    g: &'g Graph,
    v0: usize,
    a: &[Ratio<T>],
) -> Result<UrnState<'g, T>> {
    require_tree(g, v0, a)?;
    Ok(UrnState {
        graph: g,
        start: v0,
        counts: initial_counts(g, v0, a),
        draws: vec![0; g.vertex_count()],
    })
}

impl<'g, T: ExactInt> UrnState<'g, T> {
    pub fn start(&self) -> usize {
        self.start
    }

    /// Ball counts at `v`, aligned with `g.incident(v)`.
    pub fn counts(&self, v: usize) -> &[Ratio<T>] {
        &self.counts[v]
    }

    pub fn total(&self, v: usize) -> Ratio<T> {
        self.counts[v]
            .iter()
            .cloned()
            .fold(Ratio::zero(), |a, b| a + b)
    }

    /// Draws made so far at `v`.
    pub fn draws(&self, v: usize) -> u64 {
        self.draws[v]
    }

    /// Probability that the next draw at `from` sends the walk to `to`.
    pub fn draw_probability(&self, from: usize, to: usize) -> Result<Ratio<T>> {
        let j = slot(self.graph, from, to)?;
        Ok(self.counts[from][j].clone() / self.total(from))
    }

    /// Records a draw of the color leading from `from` to `to`.
    pub fn reinforce(&mut self, from: usize, to: usize) -> Result<()> {
        let j = slot(self.graph, from, to)?;
        self.counts[from][j] = self.counts[from][j].clone() + int::<T>(REINFORCEMENT);
        self.draws[from] += 1;
        Ok(())
    }

    /// Probability that the urns produce `path` (which must start at the
    /// urns' start), drawing and reinforcing along the way.
    pub fn sequence_probability(&self, path: &Trajectory) -> Result<Ratio<T>> {
        if path.start() != self.start {
            return Err(Error::StartMismatch {
                expected: self.graph.name(self.start).to_string(),
                got: self.graph.name(path.start()).to_string(),
            });
        }
        let mut urns = self.clone();
        let mut p = Ratio::one();
        for w in path.vertices().windows(2) {
            p = p * urns.draw_probability(w[0], w[1])?;
            urns.reinforce(w[0], w[1])?;
        }
        Ok(p)
    }
}

/// Runs the urn scheme for `steps` draws from the urns' start. Consumes one
/// `f64` per step, exactly like the reinforced walk.
pub fn simulate_via_urns<T: ExactInt, R: Rng + ?Sized>(
    urns: &UrnState<'_, T>,
    steps: usize,
    rng: &mut R,
) -> Result<Trajectory> {
    let g = urns.graph;
    let mut counts: Vec<Vec<f64>> = urns
        .counts
        .iter()
        .map(|c| c.iter().map(to_f64).collect())
        .collect();
    let mut v = urns.start;
    let mut vertices = Vec::with_capacity(steps + 1);
    vertices.push(v);
    for _ in 0..steps {
        if counts[v].is_empty() {
            return Err(Error::Stuck(g.name(v).to_string()));
        }
        let j = sample_weighted(rng, &counts[v]);
        counts[v][j] += REINFORCEMENT as f64;
        v = g.incident(v)[j].neighbor;
        vertices.push(v);
    }
    Trajectory::new(g, vertices)
}

/// Urn probability of `path` under the tree walk started at `v0`.
pub fn urn_path_probability<T: ExactInt>(
    g: &Graph,
    v0: usize,
    a: &[Ratio<T>],
    path: &Trajectory,
) -> Result<Ratio<T>> {
    urn_init(g, v0, a)?.sequence_probability(path)
}

/// Independent Dirichlet laws of the transition probabilities at each
/// vertex, parameters aligned with `g.incident(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletEnvironment<T: ExactInt = BigInt> {
    params: Vec<Vec<Ratio<T>>>,
}

impl<T: ExactInt> DirichletEnvironment<T> {
    pub fn params(&self, v: usize) -> &[Ratio<T>] {
        &self.params[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.params.len()
    }
}

/// Urn initial counts divided by the reinforcement.
pub fn dirichlet_parameters<T: ExactInt>(
    g: &Graph,
    v0: usize,
    a: &[Ratio<T>],
) -> Result<DirichletEnvironment<T>> {
    require_tree(g, v0, a)?;
    let two = int::<T>(REINFORCEMENT);
    Ok(DirichletEnvironment {
        params: initial_counts(g, v0, a)
            .into_iter()
            .map(|row| row.into_iter().map(|c| c / two.clone()).collect())
            .collect(),
    })
}

/// Path probability for the walk in the Dirichlet environment: a product
/// over vertices of the Dirichlet-multinomial probability of the departure
/// sequence observed there.
pub fn rwre_path_probability<T: ExactInt>(
    g: &Graph,
    v0: usize,
    a: &[Ratio<T>],
    path: &Trajectory,
) -> Result<Ratio<T>> {
    let env = dirichlet_parameters(g, v0, a)?;
    if path.start() != v0 {
        return Err(Error::StartMismatch {
            expected: g.name(v0).to_string(),
            got: g.name(path.start()).to_string(),
        });
    }
    let mut departures: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    for w in path.vertices().windows(2) {
        departures[w[0]].push(slot(g, w[0], w[1])?);
    }
    let mut p = Ratio::one();
    for (v, seq) in departures.iter().enumerate() {
        p = p * dirichlet_sequence_probability(&env.params[v], seq);
    }
    Ok(p)
}

/// `E[prod_i p_{s_i}]` for `p ~ Dirichlet(beta)`.
fn dirichlet_sequence_probability<T: ExactInt>(beta: &[Ratio<T>], seq: &[usize]) -> Ratio<T> {
    let total = beta.iter().cloned().fold(Ratio::zero(), |a, b| a + b);
    let mut seen = vec![0u64; beta.len()];
    let mut p = Ratio::one();
    for (n, &s) in seq.iter().enumerate() {
        p = p * (beta[s].clone() + int::<T>(seen[s])) / (total.clone() + int::<T>(n as u64));
        seen[s] += 1;
    }
    p
}

/// One independent Dirichlet draw per vertex (normalized Gamma variables).
/// Vertices of degree one get the point mass.
pub fn sample_environment<T: ExactInt, R: Rng + ?Sized>(
    env: &DirichletEnvironment<T>,
    rng: &mut R,
) -> Vec<Vec<f64>> {
    env.params
        .iter()
        .map(|row| match row.len() {
            0 => Vec::new(),
            1 => vec![1.0],
            _ => {
                let mut p: Vec<f64> = row
                    .iter()
                    .map(|b| {
                        Gamma::new(to_f64(b), 1.0)
                            .expect("parameters are positive")
                            .sample(rng)
                    })
                    .collect();
                let s: f64 = p.iter().sum();
                for x in &mut p {
                    *x /= s;
                }
                p
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::law::path_probability;
    use crate::walk::{seeded_rng, InitialWeights, WalkState};

    fn r(p: i64, q: i64) -> Ratio<i64> {
        Ratio::new(p, q)
    }

    #[test]
    fn acyclicity() {
        assert!(check_acyclic(&Graph::builtin("path3").unwrap()));
        assert!(check_acyclic(&Graph::builtin("star4").unwrap()));
        assert!(!check_acyclic(&Graph::builtin("triangle").unwrap()));
        let tri = Graph::builtin("triangle").unwrap();
        assert!(matches!(
            urn_init(&tri, 0, &[r(1, 1); 3]),
            Err(Error::Cyclic)
        ));
    }

    #[test]
    fn initial_urns() {
        let star = Graph::builtin("star4").unwrap();
        let urns = urn_init(&star, 0, &[r(1, 1); 3]).unwrap();
        assert_eq!(urns.counts(0), &[r(1, 1); 3]);
        assert_eq!(urns.counts(1), &[r(2, 1)]);
        let path = Graph::builtin("path3").unwrap();
        let urns = urn_init(&path, 0, &[r(1, 1); 2]).unwrap();
        let b = path.vertex("B").unwrap();
        let toward_a = path
            .incident(b)
            .iter()
            .position(|inc| inc.neighbor == 0)
            .unwrap();
        assert_eq!(urns.counts(b)[toward_a], r(2, 1));
        assert_eq!(urns.counts(b)[1 - toward_a], r(1, 1));
    }

    #[test]
    fn star_example() {
        let star = Graph::builtin("star4").unwrap();
        let a = [r(1, 1); 3];
        let p = Trajectory::from_names(&star, &["O", "L1", "O", "L2"]).unwrap();
        assert_eq!(urn_path_probability(&star, 0, &a, &p).unwrap(), r(1, 15));
        assert_eq!(rwre_path_probability(&star, 0, &a, &p).unwrap(), r(1, 15));
        assert_eq!(path_probability(&star, 0, &a, &p).unwrap(), r(1, 15));
        let env = dirichlet_parameters(&star, 0, &a).unwrap();
        assert_eq!(env.params(0), &[r(1, 2); 3]);
        assert_eq!(env.params(1), &[r(1, 1)]);
        let env2 = dirichlet_parameters(&star, 0, &[r(2, 1); 3]).unwrap();
        assert_eq!(env2.params(0), &[r(1, 1); 3]);
        // forced step away from a leaf
        let leaf = Trajectory::from_names(&star, &["L1", "O"]).unwrap();
        assert!(rwre_path_probability(&star, 1, &a, &leaf).unwrap().is_one());
    }

    #[test]
    fn urn_totals_grow_by_two() {
        let g = Graph::builtin("path3").unwrap();
        let mut urns = urn_init(&g, 0, &[r(1, 2), r(1, 1)]).unwrap();
        let before = urns.total(1);
        urns.reinforce(1, 2).unwrap();
        urns.reinforce(1, 0).unwrap();
        assert_eq!(urns.total(1), before + r(4, 1));
        assert_eq!(urns.draws(1), 2);
    }

    #[test]
    fn urn_and_walk_share_trajectories() {
        let g = Graph::from_edges(&[("r", "a"), ("r", "b"), ("b", "c"), ("b", "d")]).unwrap();
        let a = vec![r(1, 2), r(1, 1), r(2, 1), r(1, 1)];
        let urns = urn_init(&g, 0, &a).unwrap();
        let by_urn = simulate_via_urns(&urns, 500, &mut seeded_rng(9)).unwrap();
        let w = InitialWeights::new(a).unwrap();
        let by_walk = WalkState::new(&g, 0, &w)
            .unwrap()
            .run(500, &mut seeded_rng(9))
            .unwrap();
        assert_eq!(by_urn, by_walk);
    }

    #[test]
    fn environment_draws_are_normalized() {
        let star = Graph::builtin("star4").unwrap();
        let env = dirichlet_parameters(&star, 0, &[r(1, 1); 3]).unwrap();
        let mut rng = seeded_rng(4);
        for _ in 0..100 {
            let p = sample_environment(&env, &mut rng);
            assert!((p[0].iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert_eq!(p[1], vec![1.0]);
        }
    }
}
