use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "errw",
    version,
    about = "Edge-reinforced random walks: simulation, exact laws, limit densities, inference and ladder runs",
    args_override_self = true
)]
pub struct Cli {
    /// JSON object of flag values (keys are long flag names, plus an
    /// optional "command"); flags given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Directory for CSV artifacts.
    #[arg(long, global = true, env = "ERRW_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,

    /// Exit with status 4 when a numerical-degeneracy warning is raised.
    #[arg(long, global = true)]
    pub strict: bool,

    /// Worker threads for runs over several seeds.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate the walk on a finite graph; writes the trajectory and alpha_t.
    #[command(args_override_self = true)]
    Simulate(SimulateArgs),
    /// Evaluate the log limit density at a point of the simplex in both forms.
    #[command(args_override_self = true)]
    DensityEval(DensityEvalArgs),
    /// Draw environments from the limit density by Metropolis sampling.
    #[command(args_override_self = true)]
    SampleEnv(SampleEnvArgs),
    /// Compare exact path probabilities with the mixture of reversible chains.
    #[command(args_override_self = true)]
    MixtureCheck(MixtureCheckArgs),
    /// Marginal likelihoods and Bayes factors for an observed state sequence.
    #[command(args_override_self = true)]
    Bayes(BayesArgs),
    /// Walk, urn and Dirichlet-environment laws on a tree, over all short paths.
    #[command(args_override_self = true)]
    TreeCheck(TreeCheckArgs),
    /// Long runs on Z x {1..d} or Z x T with figure-ready CSVs.
    #[command(args_override_self = true)]
    Ladder(LadderArgs),
    /// Long runs on Z^2 with per-edge occupation counts.
    #[command(args_override_self = true)]
    Z2(Z2Args),
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Builtin graph (edge, path3, triangle, square, diamond, k4, star4) or
    /// an edge-list file with lines `u v [a_e]`.
    #[arg(long)]
    pub graph: String,

    /// Initial weights as `p/q` or decimals: one value for all edges, a
    /// comma-separated per-edge list, or `@FILE`. Defaults to the edge-list
    /// weights, then 1.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,

    /// Start vertex name; defaults to the first vertex.
    #[arg(long)]
    pub v0: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SamplerArgs {
    /// Retained Metropolis states.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 5_000)]
    pub burn_in: usize,
    /// Keep every n-th state after burn-in.
    #[arg(long, default_value_t = 1)]
    pub thin: usize,
    /// Initial proposal scale in centered log coordinates.
    #[arg(long, default_value_t = 0.5)]
    pub scale: f64,
    /// Burn-in iterations between scale adjustments.
    #[arg(long, default_value_t = 100)]
    pub adapt_window: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = 1000)]
    pub steps: u64,
    #[arg(long)]
    pub seed: u64,
    /// Skip trajectory.csv (useful for very long runs).
    #[arg(long)]
    pub no_trajectory: bool,
}

#[derive(Debug, Clone, Args)]
pub struct DensityEvalArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Point of the open simplex, one comma-separated value per edge.
    #[arg(long)]
    pub x: String,
    /// Also estimate the normalizing constant with this many importance draws.
    #[arg(long)]
    pub normalizer_samples: Option<usize>,
    /// Seed for the normalizer estimate.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct SampleEnvArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct MixtureCheckArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    /// Check every path from the start of length 1 to this.
    #[arg(long, default_value_t = 4)]
    pub length: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct BayesArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Observed states, one per line; `#` lines are ignored.
    #[arg(long)]
    pub data: PathBuf,
    /// Dirichlet parameters of the i.i.d. model: one value or one per vertex.
    #[arg(long, default_value = "1")]
    pub alpha: String,
    /// Symmetric Dirichlet parameter of each row of the full Markov model.
    #[arg(long, default_value = "1")]
    pub beta: String,
}

#[derive(Debug, Clone, Args)]
pub struct TreeCheckArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Enumerate every path from the start up to this length.
    #[arg(long, default_value_t = 6)]
    pub length: usize,
    /// Also report the three probabilities of this comma-separated path.
    #[arg(long)]
    pub path: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct LadderArgs {
    /// Width of the ladder Z x {1..d}.
    #[arg(long, conflicts_with = "fiber", required_unless_present = "fiber")]
    pub d: Option<usize>,
    /// Finite tree T for Z x T (builtin name or edge-list file).
    #[arg(long)]
    pub fiber: Option<String>,
    /// Uniform initial weight.
    #[arg(long, default_value = "1")]
    pub a: String,
    #[arg(long, default_value_t = 1_000_000)]
    pub steps: u64,
    /// One or more seeds, comma-separated; one run per seed.
    #[arg(long, required = true, value_delimiter = ',')]
    pub seed: Vec<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct Z2Args {
    #[arg(long, default_value = "1")]
    pub a: String,
    #[arg(long, default_value_t = 1_000_000)]
    pub steps: u64,
    #[arg(long, required = true, value_delimiter = ',')]
    pub seed: Vec<u64>,
}
