use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::homology::{enumerate_spanning_trees, CycleBasis, SpanningTree};
use crate::linalg;
use crate::walk::sample_weighted;

/// Draws `(T, y)` from the conditional law given `x`: `T` with probability
/// proportional to `prod_{e in T} x_e`, and `y` a centered Gaussian on the
/// cycle space whose precision in basis coordinates is the Gram matrix of
/// `A_x`.
#[derive(Debug, Clone)]
pub struct JointSampler<'g> {
    graph: &'g Graph,
    basis: CycleBasis,
    trees: Vec<SpanningTree>,
}

/// One conditional draw; `coords` are the cycle-basis coordinates of `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDraw {
    pub tree: usize,
    pub coords: Vec<f64>,
    pub current: Vec<f64>,
}

impl<'g> JointSampler<'g> {
    pub fn new(g: &'g Graph) -> Result<Self> {
        Ok(JointSampler {
            graph: g,
            basis: CycleBasis::fundamental(g)?,
            trees: enumerate_spanning_trees(g)?,
        })
    }

    pub fn trees(&self) -> &[SpanningTree] {
        &self.trees
    }

    pub fn basis(&self) -> &CycleBasis {
        &self.basis
    }

    pub fn sample<R: Rng + ?Sized>(&self, x: &[f64], rng: &mut R) -> Result<JointDraw> {
        if x.len() != self.graph.edge_count() {
            return Err(Error::LengthMismatch {
                expected: self.graph.edge_count(),
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
        let weights: Vec<f64> = self.trees.iter().map(|t| t.weight(x)).collect();
        let tree = sample_weighted(rng, &weights);

        let d = self.basis.dimension();
        let gram = self.basis.gram(x);
        let l = linalg::cholesky(&gram, d)
            .ok_or_else(|| Error::InvalidArgument("Gram matrix is not positive definite".into()))?;
        let z: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        // L^T c = z gives Cov(c) = (L L^T)^{-1}
        let coords = linalg::solve_upper_transposed(&l, d, &z);
        let current = self.basis.combine(&coords);
        Ok(JointDraw {
            tree,
            coords,
            current,
        })
    }
}

/// One-shot conditional draw of a spanning tree and a current.
pub fn sample_joint_given_x<R: Rng + ?Sized>(
    g: &Graph,
    x: &[f64],
    rng: &mut R,
) -> Result<(SpanningTree, Vec<f64>)> {
    let s = JointSampler::new(g)?;
    let draw = s.sample(x, rng)?;
    Ok((s.trees[draw.tree].clone(), draw.current))
}
