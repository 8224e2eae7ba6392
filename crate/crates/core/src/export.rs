//! CSV writers for trajectories, edge statistics, environment samples and
//! the ladder and `Z^2` summaries.
//!
//! Floats are written with Rust's shortest round-trip formatting, so equal
//! runs give byte-identical files.

use std::io::Write;

use crate::density::EnvironmentSample;
use crate::error::Result;
use crate::graph::Graph;
use crate::ladder::{range_trace, EdgeKind, LadderStats, Z2Occupation};
use crate::walk::Trajectory;

/// `t,vertex`.
pub fn write_trajectory<W: Write>(g: &Graph, path: &Trajectory, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "vertex"])?;
    for (t, &v) in path.vertices().iter().enumerate() {
        w.write_record([t.to_string().as_str(), g.name(v)])?;
    }
    w.flush()?;
    Ok(())
}

/// `edge,tail,head,k_t,alpha_t`.
pub fn write_edge_stats<W: Write>(g: &Graph, counts: &[u64], time: u64, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["edge", "tail", "head", "k_t", "alpha_t"])?;
    for (e, &k) in counts.iter().enumerate() {
        let (t, h) = g.endpoints(e);
        let alpha = if time == 0 {
            0.0
        } else {
            k as f64 / time as f64
        };
        w.write_record([
            g.edge_label(e),
            g.name(t).to_string(),
            g.name(h).to_string(),
            k.to_string(),
            alpha.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One row per retained state: edge columns, then `log_density`.
pub fn write_samples<W: Write>(g: &Graph, sample: &EnvironmentSample, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (0..g.edge_count()).map(|e| g.edge_label(e)).collect();
    header.push("log_density".into());
    w.write_record(&header)?;
    for (x, ld) in sample.iter().zip(sample.log_density()) {
        let mut row: Vec<String> = x.iter().map(f64::to_string).collect();
        row.push(ld.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// `level,fiber_vertex_or_rung,edge_kind,count,log10_fraction`, sorted by
/// kind, level and fiber index. Never-crossed edges have an empty
/// `log10_fraction`.
pub fn write_heatmap<W: Write>(stats: &LadderStats, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "level",
        "fiber_vertex_or_rung",
        "edge_kind",
        "count",
        "log10_fraction",
    ])?;
    let mut edges = stats.edges.clone();
    edges.sort_by_key(|e| (e.tag.kind, e.tag.x, e.tag.y));
    for e in &edges {
        let frac = if e.count == 0 || stats.steps == 0 {
            String::new()
        } else {
            (e.count as f64 / stats.steps as f64).log10().to_string()
        };
        w.write_record([
            e.tag.x.to_string(),
            e.tag.y.to_string(),
            e.tag.kind.as_str().to_string(),
            e.count.to_string(),
            frac,
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `t,max_distance`.
pub fn write_range<W: Write>(stats: &LadderStats, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "max_distance"])?;
    for (t, m) in range_trace(stats) {
        w.write_record([t.to_string(), m.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `x,y,dir,count`; `(x, y)` is the west or south endpoint and `dir` is `E`
/// or `N`.
pub fn write_z2<W: Write>(occ: &Z2Occupation, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y", "dir", "count"])?;
    let mut edges = occ.edges.clone();
    edges.sort_by_key(|e| (e.tag.y, e.tag.x, e.tag.kind == EdgeKind::North));
    for e in &edges {
        w.write_record([
            e.tag.x.to_string(),
            e.tag.y.to_string(),
            e.tag.kind.as_str().to_string(),
            e.count.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ladder::{long_run, LadderKind};
    use crate::walk::{seeded_rng, InitialWeights, WalkState};
    use num_rational::Ratio;
    use num_traits::One;

    #[test]
    fn trajectory_and_stats_csv() {
        let g = Graph::builtin("triangle").unwrap();
        let a: InitialWeights = InitialWeights::uniform(3, Ratio::one()).unwrap();
        let path = WalkState::new(&g, 0, &a)
            .unwrap()
            .run(5, &mut seeded_rng(7))
            .unwrap();
        let mut buf = Vec::new();
        write_trajectory(&g, &path, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,vertex\n0,A\n"));
        assert_eq!(text.lines().count(), 7);

        let mut buf = Vec::new();
        write_edge_stats(&g, &path.edge_counts(&g), 5, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("edge,tail,head,k_t,alpha_t\nA-B,A,B,"));
    }

    #[test]
    fn heatmap_rows() {
        let s = long_run(LadderKind::Ladder(2), 1.0, 1000, &mut seeded_rng(1)).unwrap();
        let mut buf = Vec::new();
        write_heatmap(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), s.edges.len() + 1);
        let total: u64 = text
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(3).unwrap().parse::<u64>().unwrap())
            .sum();
        assert_eq!(total, 1000);
    }
}
