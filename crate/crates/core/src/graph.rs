//! Finite undirected graphs with a fixed counting direction per edge.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::exact::{parse_rational, Rational};

/// One entry of a vertex's adjacency list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Incidence {
    pub edge: usize,
    pub neighbor: usize,
}

/// A finite, loop-free, simple undirected graph.
///
/// Each edge carries an orientation `(tail, head)` used only for signed
/// bookkeeping (currents, chain vectors). Adjacency lists hold incident
/// edges in edge-index order, which fixes the scan order of the walk kernel.
#[derive(Debug, Clone)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<Incidence>>,
}

impl Graph {
    /// Builds a graph from name pairs with canonical orientation:
    /// tail is the endpoint with the lower vertex index. Vertices are
    /// indexed in order of first appearance.
    pub fn from_edges<S: AsRef<str>>(pairs: &[(S, S)]) -> Result<Graph> {
        Self::build(pairs, false)
    }

    /// Like [`Graph::from_edges`] but keeps each pair's order as its
    /// counting direction.
    pub fn from_oriented_edges<S: AsRef<str>>(pairs: &[(S, S)]) -> Result<Graph> {
        Self::build(pairs, true)
    }

    fn build<S: AsRef<str>>(pairs: &[(S, S)], keep_orientation: bool) -> Result<Graph> {
        let mut names = Vec::new();
        let mut index = HashMap::new();
        let mut idx_pairs = Vec::with_capacity(pairs.len());
        for (u, v) in pairs {
            let mut id = |s: &str| -> usize {
                *index.entry(s.to_string()).or_insert_with(|| {
                    names.push(s.to_string());
                    names.len() - 1
                })
            };
            let (a, b) = (id(u.as_ref()), id(v.as_ref()));
            idx_pairs.push((a, b));
        }
        Self::assemble(names, index, &idx_pairs, keep_orientation)
    }

    /// Builds a graph on vertices `0..n` (named by their index).
    pub fn from_indexed(n: usize, pairs: &[(usize, usize)]) -> Result<Graph> {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        Self::with_names(names, pairs, false)
    }

    /// Builds a graph with explicit vertex names; pairs index into `names`.
    pub fn with_names(
        names: Vec<String>,
        pairs: &[(usize, usize)],
        keep_orientation: bool,
    ) -> Result<Graph> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "duplicate vertex name `{n}`"
                )));
            }
        }
        for &(u, v) in pairs {
            if u >= names.len() || v >= names.len() {
                return Err(Error::UnknownVertex(u.max(v).to_string()));
            }
        }
        Self::assemble(names, index, pairs, keep_orientation)
    }

    fn assemble(
        names: Vec<String>,
        index: HashMap<String, usize>,
        pairs: &[(usize, usize)],
        keep_orientation: bool,
    ) -> Result<Graph> {
        let mut adjacency = vec![Vec::new(); names.len()];
        let mut seen = HashMap::new();
        let mut edges = Vec::with_capacity(pairs.len());
        for &(u, v) in pairs {
            if u == v {
                return Err(Error::SelfLoop(names[u].clone()));
            }
            let key = (u.min(v), u.max(v));
            if seen.insert(key, edges.len()).is_some() {
                return Err(Error::DuplicateEdge(names[u].clone(), names[v].clone()));
            }
            let oriented = if keep_orientation { (u, v) } else { key };
            let e = edges.len();
            edges.push(oriented);
            adjacency[u].push(Incidence {
                edge: e,
                neighbor: v,
            });
            adjacency[v].push(Incidence {
                edge: e,
                neighbor: u,
            });
        }
        Ok(Graph {
            names,
            index,
            edges,
            adjacency,
        })
    }

    /// Small graphs used throughout the test suite and the CLI.
    pub fn builtin(name: &str) -> Result<Graph> {
        let pairs: &[(&str, &str)] = match name {
            "edge" => &[("A", "B")],
            "path3" => &[("A", "B"), ("B", "C")],
            "triangle" => &[("A", "B"), ("B", "C"), ("C", "A")],
            "square" => &[("A", "B"), ("B", "C"), ("C", "D"), ("D", "A")],
            "diamond" => &[("A", "B"), ("B", "C"), ("C", "D"), ("D", "A"), ("A", "C")],
            "k4" => &[
                ("A", "B"),
                ("A", "C"),
                ("A", "D"),
                ("B", "C"),
                ("B", "D"),
                ("C", "D"),
            ],
            "star4" => &[("O", "L1"), ("O", "L2"), ("O", "L3")],
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "unknown builtin graph `{name}`"
                )))
            }
        };
        Graph::from_edges(pairs)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `(tail, head)` of edge `e` in counting direction.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn incident(&self, v: usize) -> &[Incidence] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.adjacency
            .get(u)?
            .iter()
            .find(|inc| inc.neighbor == v)
            .map(|inc| inc.edge)
    }

    /// Endpoint of `e` opposite to `v`.
    pub fn other(&self, e: usize, v: usize) -> usize {
        let (t, h) = self.edges[e];
        if t == v {
            h
        } else {
            t
        }
    }

    /// Edge label `tail-head` for exports.
    pub fn edge_label(&self, e: usize) -> String {
        let (t, h) = self.edges[e];
        format!("{}-{}", self.names[t], self.names[h])
    }

    /// Resolves a path of vertex names to indices.
    pub fn resolve_path<S: AsRef<str>>(&self, path: &[S]) -> Result<Vec<usize>> {
        path.iter().map(|s| self.vertex(s.as_ref())).collect()
    }

    /// Breadth-first distances from `root`; neighbors are expanded in
    /// increasing vertex index. `None` marks unreachable vertices.
    pub fn distances(&self, root: usize) -> Vec<Option<usize>> {
        let (dist, _) = self.bfs(root);
        dist
    }

    /// BFS from `root` returning distances and the tree edge by which each
    /// vertex was discovered.
    pub(crate) fn bfs(&self, root: usize) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
        let n = self.vertex_count();
        let mut dist = vec![None; n];
        let mut parent_edge = vec![None; n];
        let mut queue = VecDeque::new();
        dist[root] = Some(0);
        queue.push_back(root);
        let mut nbrs = Vec::new();
        while let Some(u) = queue.pop_front() {
            nbrs.clear();
            nbrs.extend(self.adjacency[u].iter().copied());
            nbrs.sort_by_key(|inc| inc.neighbor);
            for inc in &nbrs {
                if dist[inc.neighbor].is_none() {
                    dist[inc.neighbor] = Some(dist[u].unwrap() + 1);
                    parent_edge[inc.neighbor] = Some(inc.edge);
                    queue.push_back(inc.neighbor);
                }
            }
        }
        (dist, parent_edge)
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.distances(0).iter().all(Option::is_some)
    }

    /// True iff the graph has no cycle (a forest).
    pub fn is_acyclic(&self) -> bool {
        let mut uf = UnionFind::new(self.vertex_count());
        self.edges.iter().all(|&(u, v)| uf.union(u, v))
    }

    /// Distance of edge `e` from `root`: the smaller BFS distance of its two
    /// endpoints.
    pub fn edge_distance(&self, root: usize, e: usize) -> Result<usize> {
        if e >= self.edge_count() {
            return Err(Error::UnknownEdge(e));
        }
        if root >= self.vertex_count() {
            return Err(Error::UnknownVertex(root.to_string()));
        }
        let dist = self.distances(root);
        let (t, h) = self.edges[e];
        match (dist[t], dist[h]) {
            (Some(a), Some(b)) => Ok(a.min(b)),
            _ => Err(Error::Disconnected),
        }
    }

    /// Signed incidence matrix `s`.
    pub fn incidence(&self) -> OrientedIncidence {
        OrientedIncidence::new(self)
    }

    /// Parses a plain-text edge list: one `u v [a_e]` triple per line.
    /// Blank lines and `#` comments are ignored. The weight column must be
    /// present on every line or on none.
    pub fn parse_edge_list(text: &str) -> Result<EdgeList> {
        let mut pairs = Vec::new();
        let mut weights = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens.as_slice() {
                [u, v] => pairs.push((u.to_string(), v.to_string())),
                [u, v, w] => {
                    pairs.push((u.to_string(), v.to_string()));
                    weights.push(parse_rational(w)?);
                }
                _ => {
                    return Err(Error::Parse(format!(
                        "line {}: expected `u v [weight]`, got `{line}`",
                        lineno + 1
                    )))
                }
            }
        }
        if !weights.is_empty() && weights.len() != pairs.len() {
            return Err(Error::Parse(
                "weight column must be given on every line or on none".into(),
            ));
        }
        let graph = Graph::from_edges(&pairs)?;
        Ok(EdgeList {
            graph,
            weights: (!weights.is_empty()).then_some(weights),
        })
    }
}

/// Result of parsing an edge-list file.
#[derive(Debug, Clone)]
pub struct EdgeList {
    pub graph: Graph,
    pub weights: Option<Vec<Rational>>,
}

/// Signed vertex-edge incidence: `+1` at the head, `-1` at the tail.
#[derive(Debug, Clone)]
pub struct OrientedIncidence {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl OrientedIncidence {
    fn new(g: &Graph) -> Self {
        OrientedIncidence {
            vertices: g.vertex_count(),
            edges: g.edges.clone(),
        }
    }

    pub fn entry(&self, v: usize, e: usize) -> i8 {
        let (t, h) = self.edges[e];
        if v == h {
            1
        } else if v == t {
            -1
        } else {
            0
        }
    }

    /// Net inflow `(s y)_v` at every vertex.
    pub fn apply(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.vertices];
        for (e, &(t, h)) in self.edges.iter().enumerate() {
            out[h] += y[e];
            out[t] -= y[e];
        }
        out
    }

    pub fn apply_int(&self, y: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.vertices];
        for (e, &(t, h)) in self.edges.iter().enumerate() {
            out[h] += y[e];
            out[t] -= y[e];
        }
        out
    }
}

/// Strictly positive edge weights, optionally normalized onto the simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexWeights {
    values: Vec<f64>,
}

pub const SIMPLEX_TOL: f64 = 1e-12;

impl SimplexWeights {
    /// Positive weights, not necessarily summing to one.
    pub fn positive(values: Vec<f64>) -> Result<Self> {
        if let Some((e, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::NonPositiveWeight {
                edge: e,
                value: v.to_string(),
            });
        }
        Ok(SimplexWeights { values })
    }

    /// A point of the open simplex; the entries must sum to one.
    pub fn on_simplex(values: Vec<f64>) -> Result<Self> {
        let w = Self::positive(values)?;
        if !w.is_normalized() {
            return Err(Error::OutsideSimplex(format!(
                "entries sum to {}",
                w.values.iter().sum::<f64>()
            )));
        }
        Ok(w)
    }

    /// Rescales positive weights onto the simplex.
    pub fn normalize(values: Vec<f64>) -> Result<Self> {
        let w = Self::positive(values)?;
        let s: f64 = w.values.iter().sum();
        Ok(SimplexWeights {
            values: w.values.iter().map(|v| v / s).collect(),
        })
    }

    pub fn is_normalized(&self) -> bool {
        (self.values.iter().sum::<f64>() - 1.0).abs() <= SIMPLEX_TOL
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// `x_v`: total weight of the edges incident to `v`.
pub fn vertex_weight(g: &Graph, x: &[f64], v: usize) -> Result<f64> {
    if v >= g.vertex_count() {
        return Err(Error::UnknownVertex(v.to_string()));
    }
    if x.len() != g.edge_count() {
        return Err(Error::LengthMismatch {
            expected: g.edge_count(),
            got: x.len(),
        });
    }
    Ok(g.incident(v).iter().map(|inc| x[inc.edge]).sum())
}

/// All vertex weights at once.
pub fn vertex_weights(g: &Graph, x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; g.vertex_count()];
    for (e, &(t, h)) in g.edges().iter().enumerate() {
        out[t] += x[e];
        out[h] += x[e];
    }
    out
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_oriented_low_to_high() {
        let g = Graph::from_edges(&[("A", "B")]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.endpoints(0), (0, 1));
        assert_eq!(g.name(0), "A");
    }

    #[test]
    fn canonical_orientation_uses_vertex_index() {
        let g = Graph::builtin("triangle").unwrap();
        assert_eq!(g.edge_count(), 3);
        // C -> A is stored as A -> C
        assert_eq!(g.endpoints(2), (0, 2));
        let o = Graph::from_oriented_edges(&[("A", "B"), ("B", "C"), ("C", "A")]).unwrap();
        assert_eq!(o.endpoints(2), (2, 0));
    }

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert_eq!(
            Graph::from_edges(&[("A", "A")]).unwrap_err(),
            Error::SelfLoop("A".into())
        );
        assert!(matches!(
            Graph::from_edges(&[("A", "B"), ("B", "A")]).unwrap_err(),
            Error::DuplicateEdge(..)
        ));
    }

    #[test]
    fn incidence_columns_have_one_head_one_tail() {
        let g = Graph::builtin("k4").unwrap();
        let s = g.incidence();
        for e in 0..g.edge_count() {
            let col: Vec<i8> = (0..g.vertex_count()).map(|v| s.entry(v, e)).collect();
            assert_eq!(col.iter().filter(|&&c| c == 1).count(), 1);
            assert_eq!(col.iter().filter(|&&c| c == -1).count(), 1);
            assert_eq!(col.iter().map(|&c| c as i32).sum::<i32>(), 0);
        }
    }

    #[test]
    fn vertex_weights_match_definition() {
        let g = Graph::builtin("triangle").unwrap();
        for v in 0..3 {
            assert_eq!(vertex_weight(&g, &[1.0, 1.0, 1.0], v).unwrap(), 2.0);
        }
        // vertex B is shared by edges 0 (AB) and 1 (BC)
        let x = [0.5, 0.25, 0.25];
        assert_eq!(vertex_weight(&g, &x, 1).unwrap(), 0.75);
        let p = Graph::builtin("path3").unwrap();
        assert_eq!(vertex_weight(&p, &[0.3, 0.7], 0).unwrap(), 0.3);
        assert!(vertex_weight(&g, &x, 7).is_err());
    }

    #[test]
    fn edge_distance_min_endpoint() {
        let g = Graph::builtin("path3").unwrap();
        assert_eq!(g.edge_distance(0, 0).unwrap(), 0);
        assert_eq!(g.edge_distance(0, 1).unwrap(), 1);
    }

    #[test]
    fn edge_distance_on_ladder_rung() {
        // Z x {1,2} window, levels -8..=8; root (0,1)
        let mut pairs = Vec::new();
        let name = |n: i32, j: i32| format!("{n}:{j}");
        for n in -8..8 {
            for j in 1..=2 {
                pairs.push((name(n, j), name(n + 1, j)));
            }
        }
        for n in -8..=8 {
            pairs.push((name(n, 1), name(n, 2)));
        }
        let g = Graph::from_edges(&pairs).unwrap();
        let root = g.vertex("0:1").unwrap();
        let rung = g
            .edge_between(g.vertex("5:1").unwrap(), g.vertex("5:2").unwrap())
            .unwrap();
        assert_eq!(g.edge_distance(root, rung).unwrap(), 5);
    }

    #[test]
    fn acyclicity_and_connectivity() {
        assert!(Graph::builtin("star4").unwrap().is_acyclic());
        assert!(Graph::builtin("path3").unwrap().is_acyclic());
        assert!(!Graph::builtin("triangle").unwrap().is_acyclic());
        let split = Graph::from_edges(&[("A", "B"), ("C", "D")]).unwrap();
        assert!(!split.is_connected());
    }

    #[test]
    fn simplex_weights_validation() {
        assert!(SimplexWeights::positive(vec![1.0, 0.0]).is_err());
        assert!(SimplexWeights::on_simplex(vec![0.5, 0.6]).is_err());
        let w = SimplexWeights::normalize(vec![2.0, 2.0]).unwrap();
        assert!(w.is_normalized());
        assert_eq!(w.values(), &[0.5, 0.5]);
    }

    #[test]
    fn parses_edge_list_with_weights() {
        let el = Graph::parse_edge_list("# tri\nA B 1/2\nB C 1\n\nC A 2\n").unwrap();
        assert_eq!(el.graph.edge_count(), 3);
        let w = el.weights.unwrap();
        assert_eq!(w[0], parse_rational("1/2").unwrap());
        assert!(Graph::parse_edge_list("A B 1\nB C\n").is_err());
        assert!(Graph::parse_edge_list("A\n").is_err());
        assert!(Graph::parse_edge_list("A A\n").is_err());
    }
}
