use serde::Serialize;
use serde_json::json;

use errw_core::density::{
    estimate_normalizer, mcmc_sample, mixture_path_probability, LimitDensity,
};
use errw_core::exact::to_f64;
use errw_core::export::{write_edge_stats, write_samples, write_trajectory};
use errw_core::law::path_probability;
use errw_core::stats::moment_summary;
use errw_core::{seeded_rng, Trajectory, WalkState};

use super::{all_paths, sampler_config, sampler_warnings};
use crate::args::{DensityEvalArgs, MixtureCheckArgs, SampleEnvArgs, SimulateArgs};
use crate::io::{parse_floats, OutDir, Setup};
use crate::report::{Failure, Report};

/// Disagreement between the two density forms beyond this is reported as
/// degenerate.
const FORM_TOLERANCE: f64 = 1e-9;

pub fn simulate(args: &SimulateArgs, out: &OutDir) -> Result<Report, Failure> {
    let s = Setup::load(&args.graph)?;
    let g = &s.graph;
    let mut walk = WalkState::new(g, s.v0, &s.weights)?;
    let mut rng = seeded_rng(args.seed);
    let mut vertices = Vec::new();
    if !args.no_trajectory {
        vertices.reserve(args.steps as usize + 1);
        vertices.push(s.v0);
    }
    let mut returns = 0u64;
    for _ in 0..args.steps {
        let v = walk.step(&mut rng)?;
        returns += u64::from(v == s.v0);
        if !args.no_trajectory {
            vertices.push(v);
        }
    }

    let mut files = serde_json::Map::new();
    if !args.no_trajectory {
        let (w, path) = out.create("trajectory.csv")?;
        write_trajectory(g, &Trajectory::new(g, vertices)?, w)?;
        files.insert("trajectory".into(), path.into());
    }
    let (w, path) = out.create("edge_stats.csv")?;
    write_edge_stats(g, walk.edge_counts(), args.steps, w)?;
    files.insert("edge_stats".into(), path.into());

    let edges: Vec<_> = walk
        .edge_counts()
        .iter()
        .enumerate()
        .map(|(e, &k)| {
            json!({
                "edge": g.edge_label(e),
                "k_t": k,
                "alpha_t": if args.steps == 0 { 0.0 } else { k as f64 / args.steps as f64 },
            })
        })
        .collect();
    Ok(Report::new(json!({
        "command": "simulate",
        "graph": s.describe(),
        "steps": args.steps,
        "seed": args.seed,
        "final_vertex": g.name(walk.position()),
        "returns_to_start": returns,
        "edges": edges,
        "files": files,
    })))
}

pub fn density_eval(args: &DensityEvalArgs) -> Result<Report, Failure> {
    let s = Setup::load(&args.graph)?;
    let x = parse_floats(&args.x)?;
    let density = LimitDensity::new(&s.graph, s.v0, s.floats())?;
    let det = density.log_phi(&x)?;
    let tree = density.log_phi_tree_form(&x)?;
    let diff = (det - tree).abs();
    let mut warnings = Vec::new();
    if !(diff <= FORM_TOLERANCE * det.abs().max(1.0)) {
        warnings.push(format!("determinant and tree forms differ by {diff:e}"));
    }

    let normalizer = match args.normalizer_samples {
        None => None,
        Some(n) => {
            let seed = args.seed.ok_or_else(|| {
                Failure::Usage("--normalizer-samples needs an explicit --seed".into())
            })?;
            let est = estimate_normalizer(&density, n, &mut seeded_rng(seed));
            if est.degenerate {
                warnings.push(format!(
                    "normalizer estimate is degenerate (effective sample size {:.1})",
                    est.effective_sample_size
                ));
            }
            Some(est)
        }
    };
    let normalized = normalizer
        .filter(|z| z.value > 0.0)
        .map(|z| det - z.value.ln());
    Ok(Report {
        summary: json!({
            "command": "density-eval",
            "graph": s.describe(),
            "x": x,
            "cycle_dimension": density.basis().dimension(),
            "log_phi_determinant": det,
            "log_phi_tree": tree,
            "abs_difference": diff,
            "normalizer": normalizer,
            "log_phi_normalized": normalized,
            "seed": args.seed,
        }),
        warnings,
    })
}

pub fn sample_env(args: &SampleEnvArgs, out: &OutDir) -> Result<Report, Failure> {
    let s = Setup::load(&args.graph)?;
    let g = &s.graph;
    let density = LimitDensity::new(g, s.v0, s.floats())?;
    let config = sampler_config(&args.sampler);
    let sample = mcmc_sample(&density, &config, &mut seeded_rng(args.seed));

    let (w, samples_path) = out.create("samples.csv")?;
    write_samples(g, &sample, w)?;
    let (mut w, diag_path) = out.create("diagnostics.json")?;
    serde_json::to_writer_pretty(
        &mut w,
        &json!({
            "config": config,
            "diagnostics": sample.diagnostics,
            "seed": args.seed,
        }),
    )
    .map_err(|e| errw_core::Error::Io(e.to_string()))?;
    std::io::Write::flush(&mut w)?;

    let moments = moment_summary(sample.flat(), g.edge_count(), Some(20));
    let mean: Vec<_> = moments
        .mean
        .iter()
        .enumerate()
        .map(|(e, m)| json!({"edge": g.edge_label(e), "value": m.value, "standard_error": m.standard_error}))
        .collect();
    Ok(Report {
        summary: json!({
            "command": "sample-env",
            "graph": s.describe(),
            "seed": args.seed,
            "config": config,
            "retained": sample.len(),
            "diagnostics": sample.diagnostics,
            "mean": mean,
            "files": {"samples": samples_path, "diagnostics": diag_path},
        }),
        warnings: sampler_warnings(&sample.diagnostics),
    })
}

#[derive(Serialize)]
struct MixtureRow {
    path: String,
    length: usize,
    exact: String,
    exact_value: f64,
    estimate: f64,
    standard_error: f64,
    z: f64,
}

pub fn mixture_check(args: &MixtureCheckArgs, out: &OutDir) -> Result<Report, Failure> {
    let s = Setup::load(&args.graph)?;
    let g = &s.graph;
    let paths = all_paths(g, s.v0, args.length)?;
    let density = LimitDensity::new(g, s.v0, s.floats())?;
    let config = sampler_config(&args.sampler);
    let sample = mcmc_sample(&density, &config, &mut seeded_rng(args.seed));

    let mut rows = Vec::with_capacity(paths.len());
    for p in &paths {
        let exact = path_probability(g, s.v0, s.exact(), &Trajectory::new(g, p.clone())?)?;
        let exact_value = to_f64(&exact);
        let est = mixture_path_probability(g, s.v0, p, &sample)?;
        let z = if est.standard_error > 0.0 {
            (est.value - exact_value) / est.standard_error
        } else if est.value == exact_value {
            0.0
        } else {
            f64::INFINITY
        };
        let names: Vec<&str> = p.iter().map(|&v| g.name(v)).collect();
        rows.push(MixtureRow {
            path: names.join("-"),
            length: p.len() - 1,
            exact: exact.to_string(),
            exact_value,
            estimate: est.value,
            standard_error: est.standard_error,
            z,
        });
    }

    let (w, csv_path) = out.create("mixture.csv")?;
    let mut writer = csv::Writer::from_writer(w);
    for r in &rows {
        writer
            .serialize(r)
            .map_err(|e| errw_core::Error::Io(e.to_string()))?;
    }
    writer.flush()?;

    let max_abs_z = rows.iter().map(|r| r.z.abs()).fold(0.0, f64::max);
    let within = rows.iter().filter(|r| r.z.abs() <= 3.0).count();
    let max_rel = rows
        .iter()
        .filter(|r| r.exact_value >= 1.0 / 20.0)
        .map(|r| (r.estimate - r.exact_value).abs() / r.exact_value)
        .fold(0.0, f64::max);
    Ok(Report {
        summary: json!({
            "command": "mixture-check",
            "graph": s.describe(),
            "seed": args.seed,
            "max_length": args.length,
            "paths": rows.len(),
            "within_3_se": within,
            "max_abs_z": max_abs_z,
            "max_relative_error_large_paths": max_rel,
            "retained": sample.len(),
            "diagnostics": sample.diagnostics,
            "files": {"mixture": csv_path},
        }),
        warnings: sampler_warnings(&sample.diagnostics),
    })
}
