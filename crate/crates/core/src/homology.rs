//! Cycle space, the power form `A_x(y) = sum_e y_e^2 / x_e`, and the two
//! determinants behind the limiting density: `det A_x` in a lattice basis
//! of the cycle space and the weighted spanning-tree polynomial.

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::ExactInt;
use crate::graph::{Graph, UnionFind};
use crate::linalg;

/// Integer basis of the cycle lattice `H_1 ∩ Z^E`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleBasis {
    vectors: Vec<Vec<i64>>,
    edges: usize,
}

impl CycleBasis {
    /// Fundamental cycles of the BFS tree rooted at vertex 0 (neighbors taken
    /// in increasing index). Each non-tree edge `e` yields one vector with
    /// `+1` at `e`, closed through the tree path from its head back to its
    /// tail. These form a Z-basis of the lattice.
    pub fn fundamental(g: &Graph) -> Result<CycleBasis> {
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        let m = g.edge_count();
        if g.vertex_count() == 0 {
            return Ok(CycleBasis {
                vectors: vec![],
                edges: m,
            });
        }
        let (dist, parent_edge) = g.bfs(0);
        let mut in_tree = vec![false; m];
        for pe in parent_edge.iter().flatten() {
            in_tree[*pe] = true;
        }
        let depth = |v: usize| dist[v].unwrap();
        let mut vectors = Vec::new();
        for e in (0..m).filter(|&e| !in_tree[e]) {
            let mut y = vec![0i64; m];
            y[e] = 1;
            let (tail, head) = g.endpoints(e);
            // Walk head -> tail through the tree: climb from both ends to the
            // common ancestor. Climbing from `head` traverses edges toward the
            // root; from `tail` we record edges to be traversed downward.
            let (mut a, mut b) = (head, tail);
            while a != b {
                if depth(a) >= depth(b) {
                    let pe = parent_edge[a].unwrap();
                    let up = g.other(pe, a);
                    y[pe] += signed_step(g, pe, a, up);
                    a = up;
                } else {
                    let pe = parent_edge[b].unwrap();
                    let up = g.other(pe, b);
                    // the cycle moves from `up` down to `b`
                    y[pe] += signed_step(g, pe, up, b);
                    b = up;
                }
            }
            vectors.push(y);
        }
        Ok(CycleBasis { vectors, edges: m })
    }

    /// Wraps an arbitrary list of integer cycle vectors (e.g. a unimodular
    /// recombination of a fundamental basis).
    pub fn from_vectors(g: &Graph, vectors: Vec<Vec<i64>>) -> Result<CycleBasis> {
        let s = g.incidence();
        for y in &vectors {
            if y.len() != g.edge_count() {
                return Err(Error::LengthMismatch {
                    expected: g.edge_count(),
                    got: y.len(),
                });
            }
            let flow = s.apply_int(y);
            if let Some((v, imb)) = flow.iter().enumerate().find(|(_, f)| **f != 0) {
                return Err(Error::NotInCycleSpace {
                    vertex: g.name(v).to_string(),
                    imbalance: *imb as f64,
                });
            }
        }
        Ok(CycleBasis {
            vectors,
            edges: g.edge_count(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<i64>] {
        &self.vectors
    }

    /// Edge-space vector `sum_i c_i b_i`.
    pub fn combine(&self, coords: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.edges];
        for (c, b) in coords.iter().zip(&self.vectors) {
            for (ye, be) in y.iter_mut().zip(b) {
                *ye += c * *be as f64;
            }
        }
        y
    }

    /// Gram matrix of `A_x` in this basis: `G_ij = sum_e b_i(e) b_j(e) / x_e`.
    pub fn gram(&self, x: &[f64]) -> Vec<f64> {
        let d = self.dimension();
        let mut gram = vec![0.0; d * d];
        for i in 0..d {
            for j in i..d {
                let v: f64 = self.vectors[i]
                    .iter()
                    .zip(&self.vectors[j])
                    .zip(x)
                    .filter(|((a, b), _)| **a != 0 && **b != 0)
                    .map(|((a, b), xe)| (*a * *b) as f64 / xe)
                    .sum();
                gram[i * d + j] = v;
                gram[j * d + i] = v;
            }
        }
        gram
    }

    pub fn gram_exact<T: ExactInt>(&self, x: &[Ratio<T>]) -> Vec<Ratio<T>> {
        let d = self.dimension();
        let mut gram = vec![Ratio::zero(); d * d];
        for i in 0..d {
            for j in i..d {
                let mut v = Ratio::<T>::zero();
                for e in 0..self.edges {
                    let p = self.vectors[i][e] * self.vectors[j][e];
                    if p != 0 {
                        v = v + signed_int::<T>(p) / x[e].clone();
                    }
                }
                gram[i * d + j] = v.clone();
                gram[j * d + i] = v;
            }
        }
        gram
    }
}

fn signed_int<T: ExactInt>(v: i64) -> Ratio<T> {
    let mag = crate::exact::int::<T>(v.unsigned_abs());
    if v < 0 {
        -mag
    } else {
        mag
    }
}

/// +1 if moving `from -> to` along `e` follows its counting direction.
fn signed_step(g: &Graph, e: usize, from: usize, to: usize) -> i64 {
    let (t, h) = g.endpoints(e);
    debug_assert!((t, h) == (from, to) || (t, h) == (to, from));
    if (t, h) == (from, to) {
        1
    } else {
        -1
    }
}

fn check_weights(g: &Graph, x: &[f64]) -> Result<()> {
    if x.len() != g.edge_count() {
        return Err(Error::LengthMismatch {
            expected: g.edge_count(),
            got: x.len(),
        });
    }
    if let Some((e, v)) = x.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(Error::NonPositiveWeight {
            edge: e,
            value: v.to_string(),
        });
    }
    Ok(())
}

/// `A_x(y) = sum_e y_e^2 / x_e`.
pub fn quadratic_form(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let mut acc = 0.0;
    for (e, (xe, ye)) in x.iter().zip(y).enumerate() {
        if !(*xe > 0.0) {
            return Err(Error::NonPositiveWeight {
                edge: e,
                value: xe.to_string(),
            });
        }
        acc += ye * ye / xe;
    }
    Ok(acc)
}

/// `det A_x` in the fundamental cycle basis (1 on acyclic graphs).
pub fn det_quadratic_form(g: &Graph, x: &[f64]) -> Result<f64> {
    check_weights(g, x)?;
    let basis = CycleBasis::fundamental(g)?;
    Ok(det_in_basis(&basis, x))
}

pub fn det_in_basis(basis: &CycleBasis, x: &[f64]) -> f64 {
    linalg::det(basis.gram(x), basis.dimension())
}

pub fn det_quadratic_form_exact<T: ExactInt>(g: &Graph, x: &[Ratio<T>]) -> Result<Ratio<T>> {
    check_exact_weights(g, x)?;
    let basis = CycleBasis::fundamental(g)?;
    Ok(linalg::det_exact(basis.gram_exact(x), basis.dimension()))
}

fn check_exact_weights<T: ExactInt>(g: &Graph, x: &[Ratio<T>]) -> Result<()> {
    if x.len() != g.edge_count() {
        return Err(Error::LengthMismatch {
            expected: g.edge_count(),
            got: x.len(),
        });
    }
    if let Some((e, v)) = x.iter().enumerate().find(|(_, v)| **v <= Ratio::zero()) {
        return Err(Error::NonPositiveWeight {
            edge: e,
            value: format!("{v}"),
        });
    }
    Ok(())
}

/// `sum_{T spanning} prod_{e in T} x_e`, via the weighted Laplacian with the
/// row and column of vertex 0 removed.
pub fn spanning_tree_polynomial(g: &Graph, x: &[f64]) -> Result<f64> {
    check_weights(g, x)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.vertex_count();
    if n <= 1 {
        return Ok(1.0);
    }
    let k = n - 1;
    let mut lap = vec![0.0; k * k];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let w = x[e];
        for (a, b) in [(u, v), (v, u)] {
            if a > 0 {
                lap[(a - 1) * k + (a - 1)] += w;
                if b > 0 {
                    lap[(a - 1) * k + (b - 1)] -= w;
                }
            }
        }
    }
    Ok(linalg::det(lap, k))
}

pub fn spanning_tree_polynomial_exact<T: ExactInt>(g: &Graph, x: &[Ratio<T>]) -> Result<Ratio<T>> {
    check_exact_weights(g, x)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.vertex_count();
    if n <= 1 {
        return Ok(Ratio::one());
    }
    let k = n - 1;
    let mut lap = vec![Ratio::<T>::zero(); k * k];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        for (a, b) in [(u, v), (v, u)] {
            if a > 0 {
                let d = (a - 1) * k + (a - 1);
                lap[d] = lap[d].clone() + x[e].clone();
                if b > 0 {
                    let o = (a - 1) * k + (b - 1);
                    lap[o] = lap[o].clone() - x[e].clone();
                }
            }
        }
    }
    Ok(linalg::det_exact(lap, k))
}

/// An acyclic edge subset, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpanningTree {
    edges: Vec<usize>,
}

impl SpanningTree {
    pub fn new(mut edges: Vec<usize>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        SpanningTree { edges }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn is_acyclic(&self, g: &Graph) -> bool {
        let mut uf = UnionFind::new(g.vertex_count());
        self.edges.iter().all(|&e| {
            let (u, v) = g.endpoints(e);
            uf.union(u, v)
        })
    }

    /// Acyclic with `|V| - 1` edges, hence connecting every vertex.
    pub fn is_spanning(&self, g: &Graph) -> bool {
        self.edges.len() + 1 == g.vertex_count()
            && self.edges.iter().all(|&e| e < g.edge_count())
            && self.is_acyclic(g)
    }

    pub fn weight(&self, x: &[f64]) -> f64 {
        self.edges.iter().map(|&e| x[e]).product()
    }
}

pub const TREE_ENUMERATION_LIMIT: usize = 20;

/// Every spanning tree, by brute force over `(|V|-1)`-subsets of edges.
pub fn enumerate_spanning_trees(g: &Graph) -> Result<Vec<SpanningTree>> {
    let m = g.edge_count();
    if m > TREE_ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            what: "spanning-tree enumeration",
            size: m,
            limit: TREE_ENUMERATION_LIMIT,
        });
    }
    let n = g.vertex_count();
    if n == 0 {
        return Ok(vec![]);
    }
    let k = n - 1;
    let mut out = Vec::new();
    if k > m {
        return Ok(out);
    }
    // Iterate k-subsets in lexicographic order.
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mut uf = UnionFind::new(n);
        if idx.iter().all(|&e| {
            let (u, v) = g.endpoints(e);
            uf.union(u, v)
        }) {
            out.push(SpanningTree { edges: idx.clone() });
        }
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if idx[i] < m - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}
