//! Reinforced walks on infinite strips `Z x G` (G a finite tree, or a path
//! for the plain ladder) and on `Z^2`, with the graph materialized lazily
//! around the visited region.
//!
//! Adjacency order at every vertex is fixed: for strips the rail toward the
//! lower level, the rail toward the higher level, then fiber edges in the
//! fiber tree's edge order; for `Z^2` west, east, south, north. Steps use the
//! same kernel as [`crate::walk::WalkState`], so a walk that stays inside a
//! finite window is step-for-step identical to the walk on the window graph.

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;
use smallvec::SmallVec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::stats::{linear_fit, LinearFit};
use crate::walk::{sample_weighted, seeded_rng};

/// Which infinite graph to walk on.
#[derive(Debug, Clone)]
pub enum LadderKind {
    /// `Z x {1, ..., d}`.
    Ladder(usize),
    /// `Z x T` for a finite tree `T`; the start sits over the tree's first
    /// vertex.
    LadderTree(Graph),
    Z2,
}

impl LadderKind {
    pub fn label(&self) -> String {
        match self {
            LadderKind::Ladder(d) => format!("ladder({d})"),
            LadderKind::LadderTree(t) => format!("ladder_tree({} vertices)", t.vertex_count()),
            LadderKind::Z2 => "z2".to_string(),
        }
    }
}

/// Lattice site: `(level, fiber vertex)` on strips, `(x, y)` on `Z^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Site {
    pub x: i64,
    pub y: i64,
}

impl Site {
    pub const ORIGIN: Site = Site { x: 0, y: 0 };

    pub fn new(x: i64, y: i64) -> Self {
        Site { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    /// Between `(x, y)` and `(x + 1, y)` on a strip.
    Rail,
    /// Fiber edge number `y` at level `x`.
    Rung,
    /// Between `(x, y)` and `(x + 1, y)` on `Z^2`.
    East,
    /// Between `(x, y)` and `(x, y + 1)` on `Z^2`.
    North,
}

impl EdgeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeKind::Rail => "rail",
            EdgeKind::Rung => "rung",
            EdgeKind::East => "E",
            EdgeKind::North => "N",
        }
    }
}

/// Identity of a materialized edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeTag {
    pub kind: EdgeKind,
    pub x: i64,
    pub y: i64,
}

impl EdgeTag {
    /// `|e|`: distance from the start of the nearer endpoint (levels on
    /// strips, Manhattan distance on `Z^2`).
    pub fn distance(&self) -> u64 {
        match self.kind {
            EdgeKind::Rail => self.x.unsigned_abs().min((self.x + 1).unsigned_abs()),
            EdgeKind::Rung => self.x.unsigned_abs(),
            EdgeKind::East => {
                self.x.unsigned_abs().min((self.x + 1).unsigned_abs()) + self.y.unsigned_abs()
            }
            EdgeKind::North => {
                self.x.unsigned_abs() + self.y.unsigned_abs().min((self.y + 1).unsigned_abs())
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Slot {
    edge: u32,
    nbr: u32,
}

const UNEXPANDED: u32 = u32::MAX;

/// The infinite graph, materialized only around expanded vertices. A vertex
/// is expanded when the walker first stands on it; expansion creates all its
/// neighbors and incident edges.
#[derive(Debug, Clone)]
pub struct LazyLadderGraph {
    kind: LadderKind,
    /// Per fiber vertex: `(fiber edge, other endpoint)` in fiber edge order.
    fiber_adj: Vec<Vec<(u32, u32)>>,
    index: FxHashMap<Site, u32>,
    sites: Vec<Site>,
    slot_offset: Vec<u32>,
    degree: Vec<u8>,
    slots: Vec<Slot>,
    edge_tags: Vec<EdgeTag>,
    counts: Vec<u64>,
    max_degree: usize,
}

pub fn build_lazy_graph(kind: LadderKind) -> Result<LazyLadderGraph> {
    let fiber_adj = match &kind {
        LadderKind::Ladder(d) => {
            if *d == 0 {
                return Err(Error::InvalidArgument(
                    "ladder width must be at least 1".into(),
                ));
            }
            path_fiber(*d)
        }
        LadderKind::LadderTree(t) => {
            if t.vertex_count() == 0 || !t.is_connected() || !t.is_acyclic() {
                return Err(Error::InvalidArgument(
                    "the fiber must be a finite tree".into(),
                ));
            }
            let mut adj = vec![Vec::new(); t.vertex_count()];
            for (e, &(u, v)) in t.edges().iter().enumerate() {
                adj[u].push((e as u32, v as u32));
                adj[v].push((e as u32, u as u32));
            }
            adj
        }
        LadderKind::Z2 => Vec::new(),
    };
    let max_degree = match kind {
        LadderKind::Z2 => 4,
        _ => 2 + fiber_adj.iter().map(Vec::len).max().unwrap_or(0),
    };
    if max_degree > u8::MAX as usize {
        return Err(Error::TooLarge {
            what: "fiber degree",
            size: max_degree,
            limit: u8::MAX as usize,
        });
    }
    let mut g = LazyLadderGraph {
        kind,
        fiber_adj,
        index: FxHashMap::default(),
        sites: Vec::new(),
        slot_offset: Vec::new(),
        degree: Vec::new(),
        slots: Vec::new(),
        edge_tags: Vec::new(),
        counts: Vec::new(),
        max_degree,
    };
    let o = g.vertex_id(Site::ORIGIN);
    g.expand(o);
    Ok(g)
}

fn path_fiber(d: usize) -> Vec<Vec<(u32, u32)>> {
    let mut adj = vec![Vec::new(); d];
    for i in 0..d.saturating_sub(1) {
        adj[i].push((i as u32, i as u32 + 1));
        adj[i + 1].push((i as u32, i as u32));
    }
    adj
}

impl LazyLadderGraph {
    pub fn kind(&self) -> &LadderKind {
        &self.kind
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Materialized vertices (expanded ones and their neighbors).
    pub fn vertex_count(&self) -> usize {
        self.sites.len()
    }

    pub fn expanded_count(&self) -> usize {
        self.slot_offset
            .iter()
            .filter(|&&o| o != UNEXPANDED)
            .count()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_tags.len()
    }

    pub fn site(&self, v: u32) -> Site {
        self.sites[v as usize]
    }

    pub fn lookup(&self, site: Site) -> Option<u32> {
        self.index.get(&site).copied()
    }

    pub fn is_expanded(&self, v: u32) -> bool {
        self.slot_offset[v as usize] != UNEXPANDED
    }

    pub fn edge_tag(&self, e: u32) -> EdgeTag {
        self.edge_tags[e as usize]
    }

    /// Crossings of each materialized edge so far.
    pub fn edge_counts(&self) -> &[u64] {
        &self.counts
    }

    /// Distance of a site from the start.
    pub fn distance(&self, s: Site) -> u64 {
        match self.kind {
            LadderKind::Z2 => s.x.unsigned_abs() + s.y.unsigned_abs(),
            _ => s.x.unsigned_abs(),
        }
    }

    /// Neighbors of a site in canonical order, with the tag of the edge to
    /// each.
    pub fn neighbor_sites(&self, s: Site) -> SmallVec<[(Site, EdgeTag); 8]> {
        let mut out = SmallVec::new();
        match self.kind {
            LadderKind::Z2 => {
                let tag = |kind, x, y| EdgeTag { kind, x, y };
                out.push((Site::new(s.x - 1, s.y), tag(EdgeKind::East, s.x - 1, s.y)));
                out.push((Site::new(s.x + 1, s.y), tag(EdgeKind::East, s.x, s.y)));
                out.push((Site::new(s.x, s.y - 1), tag(EdgeKind::North, s.x, s.y - 1)));
                out.push((Site::new(s.x, s.y + 1), tag(EdgeKind::North, s.x, s.y)));
            }
            _ => {
                let rail = |x| EdgeTag {
                    kind: EdgeKind::Rail,
                    x,
                    y: s.y,
                };
                out.push((Site::new(s.x - 1, s.y), rail(s.x - 1)));
                out.push((Site::new(s.x + 1, s.y), rail(s.x)));
                for &(fe, other) in &self.fiber_adj[s.y as usize] {
                    out.push((
                        Site::new(s.x, other as i64),
                        EdgeTag {
                            kind: EdgeKind::Rung,
                            x: s.x,
                            y: fe as i64,
                        },
                    ));
                }
            }
        }
        out
    }

    fn vertex_id(&mut self, s: Site) -> u32 {
        if let Some(&v) = self.index.get(&s) {
            return v;
        }
        let v = self.sites.len() as u32;
        self.index.insert(s, v);
        self.sites.push(s);
        self.slot_offset.push(UNEXPANDED);
        self.degree.push(0);
        v
    }

    fn expand(&mut self, v: u32) {
        let s = self.sites[v as usize];
        let nbrs = self.neighbor_sites(s);
        let offset = self.slots.len() as u32;
        for (ns, tag) in nbrs.iter().copied() {
            let u = self.vertex_id(ns);
            let edge = if self.is_expanded(u) {
                let (off, deg) = (
                    self.slot_offset[u as usize] as usize,
                    self.degree[u as usize] as usize,
                );
                self.slots[off..off + deg]
                    .iter()
                    .find(|sl| sl.nbr == v)
                    .expect("expanded neighbors link back")
                    .edge
            } else {
                self.edge_tags.push(tag);
                self.counts.push(0);
                (self.edge_tags.len() - 1) as u32
            };
            self.slots.push(Slot { edge, nbr: u });
        }
        self.slot_offset[v as usize] = offset;
        self.degree[v as usize] = nbrs.len() as u8;
    }
}

/// A reinforced walk on a lazily grown graph with uniform initial weight.
#[derive(Debug, Clone)]
pub struct LadderWalker {
    graph: LazyLadderGraph,
    a: f64,
    position: u32,
    time: u64,
}

impl LadderWalker {
    pub fn new(kind: LadderKind, a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::NonPositiveWeight {
                edge: 0,
                value: a.to_string(),
            });
        }
        let graph = build_lazy_graph(kind)?;
        Ok(LadderWalker {
            position: graph.lookup(Site::ORIGIN).unwrap(),
            graph,
            a,
            time: 0,
        })
    }

    pub fn graph(&self) -> &LazyLadderGraph {
        &self.graph
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn position(&self) -> Site {
        self.graph.sites[self.position as usize]
    }

    /// One reinforced step; returns the new site.
    #[inline]
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Site {
        let v = self.position as usize;
        let g = &mut self.graph;
        let off = g.slot_offset[v] as usize;
        let deg = g.degree[v] as usize;
        let mut w: SmallVec<[f64; 8]> = SmallVec::with_capacity(deg);
        for sl in &g.slots[off..off + deg] {
            w.push(self.a + g.counts[sl.edge as usize] as f64);
        }
        let pick = g.slots[off + sample_weighted(rng, &w)];
        g.counts[pick.edge as usize] += 1;
        self.position = pick.nbr;
        if g.slot_offset[pick.nbr as usize] == UNEXPANDED {
            g.expand(pick.nbr);
        }
        self.time += 1;
        g.sites[pick.nbr as usize]
    }
}

/// Snapshot at a checkpoint time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Checkpoint {
    pub t: u64,
    /// `|{1 <= s <= t : X_s = 0}|`.
    pub returns: u64,
    /// `max_{s <= t} |X_s|`.
    pub max_distance: u64,
    pub distance: u64,
}

/// One materialized edge and its crossing count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EdgeCount {
    pub tag: EdgeTag,
    pub count: u64,
}

/// Streaming summary of a long run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderStats {
    pub kind: String,
    pub a: f64,
    pub steps: u64,
    /// Materialized edges in creation order.
    pub edges: Vec<EdgeCount>,
    pub checkpoints: Vec<Checkpoint>,
    pub returns: u64,
    pub max_distance: u64,
    /// `histogram[n]` = number of times `1 <= s <= steps` with `|X_s| = n`.
    pub histogram: Vec<u64>,
    pub visited_vertices: usize,
    pub materialized_vertices: usize,
    pub max_degree: usize,
}

impl LadderStats {
    /// `alpha_t(e) = k_t(e) / t` for each materialized edge.
    pub fn fractions(&self) -> Vec<f64> {
        self.edges
            .iter()
            .map(|e| {
                if self.steps == 0 {
                    0.0
                } else {
                    e.count as f64 / self.steps as f64
                }
            })
            .collect()
    }
}

/// Checkpoint times `2^10, 2^11, ...` below `steps`, then `steps` itself.
pub fn checkpoint_times(steps: u64, first: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut t = first.max(1);
    while t < steps {
        out.push(t);
        t = t.saturating_mul(2);
    }
    if steps > 0 {
        out.push(steps);
    }
    out
}

pub const FIRST_CHECKPOINT: u64 = 1 << 10;

/// Runs `steps` reinforced steps from the origin, accumulating statistics
/// online. Memory grows with the visited region only.
pub fn long_run<R: Rng + ?Sized>(
    kind: LadderKind,
    a: f64,
    steps: u64,
    rng: &mut R,
) -> Result<LadderStats> {
    let mut walker = LadderWalker::new(kind, a)?;
    Ok(run_walker(&mut walker, steps, rng))
}

/// Continues `walker` for `steps` steps and summarizes the whole run.
pub fn run_walker<R: Rng + ?Sized>(
    walker: &mut LadderWalker,
    steps: u64,
    rng: &mut R,
) -> LadderStats {
    let times = checkpoint_times(steps, FIRST_CHECKPOINT);
    let mut checkpoints = Vec::with_capacity(times.len());
    let mut returns = 0u64;
    let mut max_distance = walker.graph.distance(walker.position());
    let mut histogram: Vec<u64> = Vec::new();
    let mut next = 0usize;
    for t in 1..=steps {
        let s = walker.step(rng);
        let d = walker.graph.distance(s);
        if s == Site::ORIGIN {
            returns += 1;
        }
        if d > max_distance {
            max_distance = d;
        }
        let di = d as usize;
        if di >= histogram.len() {
            histogram.resize(di + 1, 0);
        }
        histogram[di] += 1;
        if next < times.len() && times[next] == t {
            checkpoints.push(Checkpoint {
                t,
                returns,
                max_distance,
                distance: d,
            });
            next += 1;
        }
    }
    let g = &walker.graph;
    LadderStats {
        kind: g.kind.label(),
        a: walker.a,
        steps,
        edges: g
            .edge_tags
            .iter()
            .zip(&g.counts)
            .map(|(&tag, &count)| EdgeCount { tag, count })
            .collect(),
        checkpoints,
        returns,
        max_distance,
        histogram,
        visited_vertices: g.expanded_count(),
        materialized_vertices: g.vertex_count(),
        max_degree: g.max_degree,
    }
}

/// Independent runs, one per seed, in parallel; results come back in seed
/// order and do not depend on the thread count.
pub fn long_run_many(
    kind: &LadderKind,
    a: f64,
    steps: u64,
    seeds: &[u64],
) -> Result<Vec<LadderStats>> {
    seeds
        .par_iter()
        .map(|&seed| long_run(kind.clone(), a, steps, &mut seeded_rng(seed)))
        .collect()
}

/// Least-squares line through the per-level maxima of `ln alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    /// Empirical stand-in for `-c(a, G)`.
    pub slope: f64,
    pub fit: LinearFit,
    pub levels: usize,
}

pub const MIN_DECAY_LEVELS: usize = 10;

/// Fits `max_{|e| = n} ln alpha(e)` against `n`.
pub fn decay_fit(stats: &LadderStats) -> Result<DecayFit> {
    let points: Vec<(u64, f64)> = stats
        .edges
        .iter()
        .zip(stats.fractions())
        .map(|(e, f)| (e.tag.distance(), f))
        .collect();
    decay_fit_points(&points)
}

/// [`decay_fit`] on raw `(|e|, alpha)` pairs; zero fractions are skipped.
pub fn decay_fit_points(points: &[(u64, f64)]) -> Result<DecayFit> {
    let mut best: std::collections::BTreeMap<u64, f64> = Default::default();
    for &(level, alpha) in points {
        if alpha > 0.0 {
            let l = alpha.ln();
            best.entry(level).and_modify(|m| *m = m.max(l)).or_insert(l);
        }
    }
    if best.len() < MIN_DECAY_LEVELS {
        return Err(Error::InsufficientData(format!(
            "decay fit needs {MIN_DECAY_LEVELS} levels with mass, got {}",
            best.len()
        )));
    }
    let xs: Vec<f64> = best.keys().map(|&k| k as f64).collect();
    let ys: Vec<f64> = best.values().copied().collect();
    let fit = linear_fit(&xs, &ys).expect("distinct levels");
    Ok(DecayFit {
        slope: fit.slope,
        fit,
        levels: best.len(),
    })
}

/// Empirical `P(|X| >= n)` pooled over all recorded times.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailProfile {
    /// `(n, P(|X| >= n))`, `n = 0, 1, ...` while the tail is positive.
    pub rows: Vec<(u64, f64)>,
}

pub fn tail_profile(stats: &LadderStats) -> TailProfile {
    let total: u64 = stats.histogram.iter().sum();
    let mut rows = Vec::with_capacity(stats.histogram.len());
    let mut remaining = total;
    for (n, &c) in stats.histogram.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        rows.push((n as u64, remaining as f64 / total as f64));
        remaining -= c;
    }
    TailProfile { rows }
}

impl TailProfile {
    /// Slope of `ln P(|X| >= n)` over `n >= from`; `None` with fewer than
    /// two such rows.
    pub fn slope_from(&self, from: u64) -> Option<LinearFit> {
        let (xs, ys): (Vec<f64>, Vec<f64>) = self
            .rows
            .iter()
            .filter(|(n, p)| *n >= from && *p > 0.0)
            .map(|&(n, p)| (n as f64, p.ln()))
            .unzip();
        linear_fit(&xs, &ys)
    }
}

/// `(t, max_{s <= t} |X_s|)` at the checkpoints.
pub fn range_trace(stats: &LadderStats) -> Vec<(u64, u64)> {
    stats
        .checkpoints
        .iter()
        .map(|c| (c.t, c.max_distance))
        .collect()
}

/// Range against `ln t` over the checkpoints.
pub fn range_fit(stats: &LadderStats) -> Option<LinearFit> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = stats
        .checkpoints
        .iter()
        .map(|c| ((c.t as f64).ln(), c.max_distance as f64))
        .unzip();
    linear_fit(&xs, &ys)
}

/// Crossing counts of a `Z^2` run, one entry per materialized edge, plus the
/// visited sites.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Z2Occupation {
    pub steps: u64,
    pub edges: Vec<EdgeCount>,
    pub visited: Vec<Site>,
}

pub fn z2_occupation<R: Rng + ?Sized>(a: f64, steps: u64, rng: &mut R) -> Result<Z2Occupation> {
    let mut walker = LadderWalker::new(LadderKind::Z2, a)?;
    for _ in 0..steps {
        walker.step(rng);
    }
    let g = &walker.graph;
    let mut visited: Vec<Site> = (0..g.vertex_count() as u32)
        .filter(|&v| g.is_expanded(v))
        .map(|v| g.site(v))
        .collect();
    visited.sort();
    Ok(Z2Occupation {
        steps,
        edges: g
            .edge_tags
            .iter()
            .zip(&g.counts)
            .map(|(&tag, &count)| EdgeCount { tag, count })
            .collect(),
        visited,
    })
}

impl Z2Occupation {
    /// Counts on edges whose endpoints were both visited.
    pub fn region_counts(&self) -> Vec<u64> {
        let visited: rustc_hash::FxHashSet<Site> = self.visited.iter().copied().collect();
        self.edges
            .iter()
            .filter(|e| {
                let (u, v) = z2_endpoints(&e.tag);
                visited.contains(&u) && visited.contains(&v)
            })
            .map(|e| e.count)
            .collect()
    }
}

/// Endpoints of a `Z^2` edge.
pub fn z2_endpoints(tag: &EdgeTag) -> (Site, Site) {
    let s = Site::new(tag.x, tag.y);
    match tag.kind {
        EdgeKind::North => (s, Site::new(tag.x, tag.y + 1)),
        _ => (s, Site::new(tag.x + 1, tag.y)),
    }
}

/// The finite piece of the infinite graph with `|X| <= radius` (levels on
/// strips, both coordinates on `Z^2`), with the same adjacency order. Vertex
/// names are `x,y`; returns the graph and the origin's index.
pub fn window_graph(kind: &LadderKind, radius: i64) -> Result<(Graph, usize)> {
    let lazy = build_lazy_graph(kind.clone())?;
    let mut sites: Vec<Site> = Vec::new();
    let mut pairs: Vec<(Site, Site)> = Vec::new();
    match kind {
        LadderKind::Z2 => {
            for y in -radius..=radius {
                for x in -radius..=radius {
                    sites.push(Site::new(x, y));
                }
            }
            // horizontal edges ordered by x, then vertical ones ordered by y
            for y in -radius..=radius {
                for x in -radius..radius {
                    pairs.push((Site::new(x, y), Site::new(x + 1, y)));
                }
            }
            for x in -radius..=radius {
                for y in -radius..radius {
                    pairs.push((Site::new(x, y), Site::new(x, y + 1)));
                }
            }
        }
        _ => {
            let fibers = lazy.fiber_adj.len() as i64;
            let fiber_edges: Vec<(u32, u32)> = {
                let mut fe: Vec<(u32, u32, u32)> = Vec::new();
                for (u, adj) in lazy.fiber_adj.iter().enumerate() {
                    for &(e, v) in adj {
                        if (u as u32) < v {
                            fe.push((e, u as u32, v));
                        }
                    }
                }
                fe.sort();
                fe.into_iter().map(|(_, u, v)| (u, v)).collect()
            };
            for x in -radius..=radius {
                for y in 0..fibers {
                    sites.push(Site::new(x, y));
                }
            }
            // block per level: rails up to the next level, then fiber edges
            for x in -radius..=radius {
                if x < radius {
                    for y in 0..fibers {
                        pairs.push((Site::new(x, y), Site::new(x + 1, y)));
                    }
                }
                for &(u, v) in &fiber_edges {
                    pairs.push((Site::new(x, u as i64), Site::new(x, v as i64)));
                }
            }
        }
    }
    let index: std::collections::HashMap<Site, usize> =
        sites.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let names = sites.iter().map(|s| format!("{},{}", s.x, s.y)).collect();
    let idx_pairs: Vec<(usize, usize)> = pairs.iter().map(|(u, v)| (index[u], index[v])).collect();
    let g = Graph::with_names(names, &idx_pairs, true)?;
    Ok((g, index[&Site::ORIGIN]))
}
