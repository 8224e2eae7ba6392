use rayon::prelude::*;
use serde_json::{json, Value};

use errw_core::exact::to_f64;
use errw_core::export::{write_heatmap, write_range, write_z2};
use errw_core::ladder::{
    decay_fit, long_run_many, range_fit, tail_profile, z2_occupation, LadderKind, LadderStats,
};
use errw_core::stats::gini;
use errw_core::{seeded_rng, Error};

use crate::args::{LadderArgs, Z2Args};
use crate::io::{load_graph, parse_scalar, OutDir};
use crate::report::{Failure, Report};

/// The tail slope is fitted over `n >= TAIL_FROM`.
const TAIL_FROM: u64 = 10;

fn pool(jobs: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Failure::Usage(format!("cannot start {jobs} workers: {e}")))
}

fn write_tail<W: std::io::Write>(stats: &LadderStats, out: W) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Failure::Domain(Error::Io(e.to_string()));
    w.write_record(["n", "tail_probability"]).map_err(io)?;
    for (n, p) in tail_profile(stats).rows {
        w.write_record([n.to_string(), p.to_string()]).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn ladder(args: &LadderArgs, jobs: usize, out: &OutDir) -> Result<Report, Failure> {
    let kind = match (args.d, &args.fiber) {
        (Some(d), _) => LadderKind::Ladder(d),
        (None, Some(input)) => LadderKind::LadderTree(load_graph(input)?.0),
        (None, None) => return Err(Failure::Usage("one of --d or --fiber is required".into())),
    };
    let a = to_f64(&parse_scalar(&args.a)?);
    let runs = pool(jobs)?.install(|| long_run_many(&kind, a, args.steps, &args.seed))?;

    let mut warnings = Vec::new();
    let mut summaries = Vec::new();
    for (&seed, stats) in args.seed.iter().zip(&runs) {
        let (w, heatmap) = out.create(&format!("heatmap_seed{seed}.csv"))?;
        write_heatmap(stats, w)?;
        let (w, range) = out.create(&format!("range_seed{seed}.csv"))?;
        write_range(stats, w)?;
        let (w, tail) = out.create(&format!("tail_seed{seed}.csv"))?;
        write_tail(stats, w)?;

        let decay = match decay_fit(stats) {
            Ok(f) => {
                json!({"slope": f.slope, "intercept": f.fit.intercept, "r_squared": f.fit.r_squared, "levels": f.levels})
            }
            Err(e) => {
                warnings.push(format!("seed {seed}: {e}"));
                Value::Null
            }
        };
        let range_line = range_fit(stats)
            .map(|f| json!({"slope": f.slope, "intercept": f.intercept, "r_squared": f.r_squared}));
        let tail_slope = tail_profile(stats).slope_from(TAIL_FROM).map(|f| f.slope);
        let increasing = stats
            .checkpoints
            .windows(2)
            .all(|w| w[0].returns < w[1].returns);
        summaries.push(json!({
            "seed": seed,
            "returns": stats.returns,
            "max_distance": stats.max_distance,
            "returns_strictly_increasing": increasing,
            "decay_fit": decay,
            "range_fit": range_line,
            "tail_slope": tail_slope,
            "visited_vertices": stats.visited_vertices,
            "materialized_vertices": stats.materialized_vertices,
            "materialized_edges": stats.edges.len(),
            "checkpoints": stats.checkpoints,
            "files": {"heatmap": heatmap, "range": range, "tail": tail},
        }));
    }
    Ok(Report {
        summary: json!({
            "command": "ladder",
            "kind": kind.label(),
            "a": a,
            "steps": args.steps,
            "tail_from": TAIL_FROM,
            "runs": summaries,
        }),
        warnings,
    })
}

pub fn z2(args: &Z2Args, jobs: usize, out: &OutDir) -> Result<Report, Failure> {
    let a = to_f64(&parse_scalar(&args.a)?);
    let runs = pool(jobs)?.install(|| {
        args.seed
            .par_iter()
            .map(|&seed| z2_occupation(a, args.steps, &mut seeded_rng(seed)))
            .collect::<errw_core::Result<Vec<_>>>()
    })?;
    let mut summaries = Vec::new();
    for (&seed, occ) in args.seed.iter().zip(&runs) {
        let (w, path) = out.create(&format!("z2_seed{seed}.csv"))?;
        write_z2(occ, w)?;
        let region: Vec<f64> = occ.region_counts().iter().map(|&c| c as f64).collect();
        summaries.push(json!({
            "seed": seed,
            "visited_sites": occ.visited.len(),
            "materialized_edges": occ.edges.len(),
            "region_edges": region.len(),
            "region_gini": gini(&region),
            "max_count": occ.edges.iter().map(|e| e.count).max().unwrap_or(0),
            "files": {"edges": path},
        }));
    }
    Ok(Report::new(json!({
        "command": "z2",
        "a": a,
        "steps": args.steps,
        "runs": summaries,
    })))
}
