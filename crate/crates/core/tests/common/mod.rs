//! Shared oracles for the integration tests: small-graph enumeration, an
//! exhaustive path walker with exact sequential probabilities, and a
//! tanh-sinh quadrature of the limit density on the triangle.
#![allow(dead_code)]

use std::collections::BTreeSet;

use errw_core::law::ExactLaw;
use errw_core::Graph;
use num_rational::Ratio;

pub type Q = Ratio<i64>;

pub fn q(p: i64, d: i64) -> Q {
    Ratio::new(p, d)
}

/// `{1/2, 1, 2}`.
pub fn weight_values() -> Vec<Q> {
    vec![q(1, 2), q(1, 1), q(2, 1)]
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut np = p.clone();
            np.insert(i, n - 1);
            out.push(np);
        }
    }
    out
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == u && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

fn subsets(
    pool: &[(usize, usize)],
    k: usize,
    start: usize,
    cur: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..pool.len() {
        cur.push(pool[i]);
        subsets(pool, k, i + 1, cur, out);
        cur.pop();
    }
}

/// Every connected simple graph with between 1 and `max_edges` edges, one per
/// isomorphism class, vertices named `0, 1, ...`.
pub fn connected_graphs(max_edges: usize) -> Vec<Graph> {
    let mut classes: BTreeSet<(usize, Vec<(usize, usize)>)> = BTreeSet::new();
    for n in 2..=max_edges + 1 {
        let perms = permutations(n);
        let pool: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        for m in (n - 1)..=max_edges.min(pool.len()) {
            let mut sets = Vec::new();
            subsets(&pool, m, 0, &mut Vec::new(), &mut sets);
            for es in sets {
                if !connected(n, &es) {
                    continue;
                }
                let canon = perms
                    .iter()
                    .map(|p| {
                        let mut e: Vec<(usize, usize)> = es
                            .iter()
                            .map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b])))
                            .collect();
                        e.sort();
                        e
                    })
                    .min()
                    .unwrap();
                classes.insert((n, canon));
            }
        }
    }
    classes
        .into_iter()
        .map(|(n, es)| Graph::from_indexed(n, &es).unwrap())
        .collect()
}

/// Trees with at most `max_edges` edges, one per isomorphism class.
pub fn trees(max_edges: usize) -> Vec<Graph> {
    connected_graphs(max_edges)
        .into_iter()
        .filter(|g| g.edge_count() + 1 == g.vertex_count())
        .collect()
}

/// All vectors in `values^m`.
pub fn assignments(m: usize, values: &[Q]) -> Vec<Vec<Q>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |v| {
                    let mut n = p.clone();
                    n.push(*v);
                    n
                })
            })
            .collect();
    }
    out
}

/// State handed to the visitor at every node of the path tree.
pub struct Node<'a> {
    pub path: &'a [usize],
    /// Edge crossed at each step.
    pub edges: &'a [usize],
    /// `prefix[s]` is the exact probability of `path[..=s]`.
    pub prefix: &'a [Q],
    pub counts: &'a [u64],
}

/// Depth-first walk over every path of length `<= max_len` from `v0`, with
/// the probability of each prefix accumulated one exact step at a time.
pub fn for_each_path<F: FnMut(&Node)>(g: &Graph, v0: usize, a: &[Q], max_len: usize, mut visit: F) {
    let mut law = ExactLaw::new(g, v0, a).unwrap();
    let mut path = vec![v0];
    let mut edges = Vec::new();
    let mut prefix = vec![q(1, 1)];
    let mut counts = vec![0u64; g.edge_count()];
    fn rec<F: FnMut(&Node)>(
        g: &Graph,
        law: &mut ExactLaw<'_, i64>,
        path: &mut Vec<usize>,
        edges: &mut Vec<usize>,
        prefix: &mut Vec<Q>,
        counts: &mut Vec<u64>,
        max_len: usize,
        visit: &mut F,
    ) {
        visit(&Node {
            path,
            edges,
            prefix,
            counts,
        });
        if edges.len() == max_len {
            return;
        }
        let here = *path.last().unwrap();
        for i in 0..g.incident(here).len() {
            let inc = g.incident(here)[i];
            let p = law.advance(inc.neighbor).unwrap();
            let last = *prefix.last().unwrap();
            prefix.push(last * p);
            path.push(inc.neighbor);
            edges.push(inc.edge);
            counts[inc.edge] += 1;
            rec(g, law, path, edges, prefix, counts, max_len, visit);
            counts[inc.edge] -= 1;
            edges.pop();
            path.pop();
            prefix.pop();
            law.retreat();
        }
    }
    rec(
        g,
        &mut law,
        &mut path,
        &mut edges,
        &mut prefix,
        &mut counts,
        max_len,
        &mut visit,
    );
}

/// Tanh-sinh nodes on `(0, 1)` as `(x, 1 - x, weight)`; both coordinates are
/// computed directly so that neither loses precision near its endpoint.
pub fn tanh_sinh_nodes(h: f64) -> Vec<(f64, f64, f64)> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut out = Vec::new();
    let n = (4.0 / h).ceil() as i64;
    for k in -n..=n {
        let t = k as f64 * h;
        let s = half_pi * t.sinh();
        let x = 1.0 / (1.0 + (-2.0 * s).exp());
        let xc = 1.0 / (1.0 + (2.0 * s).exp());
        let w = h * half_pi * t.cosh() / (2.0 * s.cosh() * s.cosh());
        if x > 0.0 && xc > 0.0 && w > 0.0 && w.is_finite() {
            out.push((x, xc, w));
        }
    }
    out
}

/// Unnormalized limit density on the triangle `A-B, B-C, C-A` (edges in
/// that order) started at `A`, written out by hand: the cycle space is
/// spanned by one vector with unit entries, so `det A_x = sum_e 1/x_e`.
pub fn triangle_density(a: [f64; 3], x: [f64; 3]) -> f64 {
    let (ab, bc, ca) = (x[0], x[1], x[2]);
    let (xa, xb, xc) = (ab + ca, ab + bc, bc + ca);
    let (aa, ab_, ac) = (a[0] + a[2], a[0] + a[1], a[1] + a[2]);
    let edge = ab.powf(a[0] - 0.5) * bc.powf(a[1] - 0.5) * ca.powf(a[2] - 0.5);
    let vert = xa.powf(-aa / 2.0) * xb.powf(-(ab_ + 1.0) / 2.0) * xc.powf(-(ac + 1.0) / 2.0);
    edge * vert * (1.0 / ab + 1.0 / bc + 1.0 / ca).sqrt()
}

/// `int_simplex f(x) phi(x)` for each component of `f`, by nested tanh-sinh
/// in the chart `x = (u, (1-u) v, (1-u)(1-v))` (Jacobian `1-u`).
pub fn triangle_integrals<F: Fn([f64; 3]) -> Vec<f64>>(a: [f64; 3], h: f64, f: F) -> Vec<f64> {
    let nodes = tanh_sinh_nodes(h);
    let mut acc: Vec<f64> = Vec::new();
    for &(u, uc, wu) in &nodes {
        for &(v, vc, wv) in &nodes {
            let x = [u, uc * v, uc * vc];
            let w = wu * wv * uc * triangle_density(a, x);
            if !(w.is_finite() && w > 0.0) {
                continue;
            }
            let vals = f(x);
            if acc.is_empty() {
                acc = vec![0.0; vals.len()];
            }
            for (s, v) in acc.iter_mut().zip(vals) {
                *s += w * v;
            }
        }
    }
    acc
}

/// Normalizer, means and second moments of the triangle's limit law.
pub struct TriangleMoments {
    pub normalizer: f64,
    pub mean: [f64; 3],
    /// Row-major covariance.
    pub cov: [f64; 9],
}

pub fn triangle_moments(a: [f64; 3], h: f64) -> TriangleMoments {
    let r = triangle_integrals(a, h, |x| {
        let mut v = vec![1.0, x[0], x[1], x[2]];
        for i in 0..3 {
            for j in 0..3 {
                v.push(x[i] * x[j]);
            }
        }
        v
    });
    let z = r[0];
    let mean = [r[1] / z, r[2] / z, r[3] / z];
    let mut cov = [0.0; 9];
    for i in 0..3 {
        for j in 0..3 {
            cov[i * 3 + j] = r[4 + i * 3 + j] / z - mean[i] * mean[j];
        }
    }
    TriangleMoments {
        normalizer: z,
        mean,
        cov,
    }
}

/// Random connected simple graph: a random spanning tree on `2..=max_vertices`
/// vertices plus random extra edges, at most `max_edges` in total.
pub fn random_connected_graph<R: rand::Rng>(
    rng: &mut R,
    max_vertices: usize,
    max_edges: usize,
) -> Graph {
    use rand::seq::SliceRandom;
    let n = rng.random_range(2..=max_vertices);
    let max_m = (n * (n - 1) / 2).min(max_edges).max(n - 1);
    let m = rng.random_range(n - 1..=max_m);
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
    let mut pool: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|e| !edges.contains(e))
        .collect();
    pool.shuffle(rng);
    edges.extend(pool.into_iter().take(m - (n - 1)));
    Graph::from_indexed(n, &edges).unwrap()
}
