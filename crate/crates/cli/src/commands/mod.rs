mod inference;
mod ladder;
mod walk;

use errw_core::density::{
    SamplerConfig, SamplerDiagnostics, MIN_EFFECTIVE_SAMPLES, TARGET_ACCEPTANCE,
};
use errw_core::{Error, Graph};

use crate::args::{Cli, Command, SamplerArgs};
use crate::io::OutDir;
use crate::report::{Failure, Report};

/// Largest number of paths an exhaustive check will enumerate.
pub const PATH_LIMIT: usize = 200_000;

pub fn run(cli: &Cli) -> Result<Report, Failure> {
    let out = OutDir::new(&cli.out_dir);
    match &cli.command {
        Command::Simulate(a) => walk::simulate(a, &out),
        Command::DensityEval(a) => walk::density_eval(a),
        Command::SampleEnv(a) => walk::sample_env(a, &out),
        Command::MixtureCheck(a) => walk::mixture_check(a, &out),
        Command::Bayes(a) => inference::bayes(a),
        Command::TreeCheck(a) => inference::tree_check(a),
        Command::Ladder(a) => ladder::ladder(a, cli.jobs, &out),
        Command::Z2(a) => ladder::z2(a, cli.jobs, &out),
    }
}

/// Every path from `v0` with 1 to `max_len` steps, shortest first.
fn all_paths(g: &Graph, v0: usize, max_len: usize) -> Result<Vec<Vec<usize>>, Failure> {
    let mut out = Vec::new();
    let mut layer = vec![vec![v0]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &layer {
            for inc in g.incident(*p.last().unwrap()) {
                let mut q = p.clone();
                q.push(inc.neighbor);
                next.push(q);
            }
            if out.len() + next.len() > PATH_LIMIT {
                return Err(Error::TooLarge {
                    what: "path enumeration",
                    size: out.len() + next.len(),
                    limit: PATH_LIMIT,
                }
                .into());
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    Ok(out)
}

fn sampler_config(s: &SamplerArgs) -> SamplerConfig {
    SamplerConfig {
        samples: s.samples,
        burn_in: s.burn_in,
        thin: s.thin,
        initial_scale: s.scale,
        adapt_window: s.adapt_window,
    }
}

fn sampler_warnings(d: &SamplerDiagnostics) -> Vec<String> {
    let mut w = Vec::new();
    let (lo, hi) = TARGET_ACCEPTANCE;
    if !(lo..=hi).contains(&d.acceptance_rate) {
        w.push(format!(
            "Metropolis acceptance rate {:.3} outside [{lo}, {hi}]",
            d.acceptance_rate
        ));
    }
    if !(d.effective_sample_size >= MIN_EFFECTIVE_SAMPLES) {
        w.push(format!(
            "effective sample size {:.1} below {MIN_EFFECTIVE_SAMPLES}",
            d.effective_sample_size
        ));
    }
    w
}
