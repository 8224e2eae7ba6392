use num_traits::Zero;
use serde_json::{json, Value};

use errw_core::bayes::{
    bayes_factor, full_markov_marginal_likelihood, iid_marginal_likelihood,
    log_full_markov_marginal_likelihood, log_iid_marginal_likelihood, log_marginal_likelihood,
    marginal_likelihood, posterior_update, symmetric_rows, ObservedSequence, PriorParams,
};
use errw_core::exact::to_f64;
use errw_core::law::path_probability;
use errw_core::tree::{check_acyclic, rwre_path_probability, urn_path_probability};
use errw_core::{Error, Rational, Trajectory};

use super::all_paths;
use crate::args::{BayesArgs, TreeCheckArgs};
use crate::io::{broadcast, parse_scalar, parse_values, read_text, Setup};
use crate::report::{Failure, Report};

/// Exact rational marginal likelihoods are skipped for longer sequences.
const EXACT_LIMIT: usize = 2000;

pub fn bayes(args: &BayesArgs) -> Result<Report, Failure> {
    let s = Setup::load(&args.graph)?;
    let g = &s.graph;
    let data = ObservedSequence::parse(&read_text(&args.data)?);
    if data.is_empty() {
        return Err(Error::InsufficientData("no observations".into()).into());
    }
    let traj = data.resolve(g)?;
    if args.graph.v0.is_some() && traj.start() != s.v0 {
        return Err(Error::StartMismatch {
            expected: g.name(s.v0).into(),
            got: g.name(traj.start()).into(),
        }
        .into());
    }
    let prior = PriorParams::new(g, traj.start(), s.exact().to_vec())?;
    let states: Vec<String> = g.names().to_vec();
    let alpha = broadcast(parse_values(&args.alpha)?, states.len())?;
    let alpha_f: Vec<f64> = alpha.iter().map(to_f64).collect();
    let rows = symmetric_rows(g, parse_scalar(&args.beta)?);
    let rows_f: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().map(to_f64).collect())
        .collect();

    let log_rev = log_marginal_likelihood(&prior, &traj)?;
    let log_iid = log_iid_marginal_likelihood(&states, &alpha_f, &data)?;
    let log_full = log_full_markov_marginal_likelihood(g, &rows_f, &traj)?;

    let exact = if data.len() <= EXACT_LIMIT {
        let rev = marginal_likelihood(&prior, &traj)?;
        let iid = iid_marginal_likelihood(&states, &alpha, &data)?;
        let full = full_markov_marginal_likelihood(g, &rows, &traj)?;
        json!({
            "reversible": rev.to_string(),
            "iid": iid.to_string(),
            "full_markov": full.to_string(),
            "iid_vs_reversible": (&iid / &rev).to_string(),
            "reversible_vs_full_markov": (&rev / &full).to_string(),
        })
    } else {
        Value::Null
    };

    let post = posterior_update(&prior, &traj)?;
    Ok(Report::new(json!({
        "command": "bayes",
        "graph": s.describe(),
        "observations": data.len(),
        "start": g.name(traj.start()),
        "log_marginal_likelihood": {
            "reversible": log_rev,
            "iid": log_iid,
            "full_markov": log_full,
        },
        "bayes_factors": {
            "iid_vs_reversible": bayes_factor(log_iid, log_rev),
            "reversible_vs_full_markov": bayes_factor(log_rev, log_full),
        },
        "exact": exact,
        "posterior": {
            "start": g.name(post.start()),
            "weights": post.weights().iter().map(ToString::to_string).collect::<Vec<_>>(),
        },
    })))
}

pub fn tree_check(args: &TreeCheckArgs) -> Result<Report, Failure> {
    let s = Setup::load(&args.graph)?;
    let g = &s.graph;
    if !check_acyclic(g) {
        return Err(Error::Cyclic.into());
    }
    let a = s.exact();
    let three = |t: &Trajectory| -> Result<[Rational; 3], Failure> {
        Ok([
            path_probability(g, s.v0, a, t)?,
            urn_path_probability(g, s.v0, a, t)?,
            rwre_path_probability(g, s.v0, a, t)?,
        ])
    };

    let paths = all_paths(g, s.v0, args.length)?;
    let mut totals = vec![Rational::zero(); args.length];
    let mut mismatches = Vec::new();
    for p in &paths {
        let t = Trajectory::new(g, p.clone())?;
        let [walk, urn, rwre] = three(&t)?;
        if walk != urn || walk != rwre {
            let names: Vec<&str> = p.iter().map(|&v| g.name(v)).collect();
            mismatches.push(names.join("-"));
        }
        totals[p.len() - 2] += walk;
    }

    let path = match &args.path {
        None => Value::Null,
        Some(input) => {
            let names: Vec<&str> = input.split(',').map(str::trim).collect();
            let t = Trajectory::from_names(g, &names)?;
            let [walk, urn, rwre] = three(&t)?;
            json!({
                "vertices": names,
                "walk": walk.to_string(),
                "urn": urn.to_string(),
                "dirichlet_environment": rwre.to_string(),
                "agree": walk == urn && walk == rwre,
            })
        }
    };
    Ok(Report::new(json!({
        "command": "tree-check",
        "graph": s.describe(),
        "max_length": args.length,
        "paths": paths.len(),
        "mismatches": mismatches.len(),
        "mismatched_paths": mismatches,
        "total_probability_by_length": totals.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "path": path,
    })))
}
