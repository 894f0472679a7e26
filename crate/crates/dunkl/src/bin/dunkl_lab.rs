//! `dunkl-lab`: simulate radial Dunkl / beta-ensemble diffusions and check
//! their laws against closed-form references.
//!
//! Every subcommand accepts `--config <file.json>`; explicit flags override
//! config values.  The seed resolves as flag/config, then the
//! `DUNKL_LAB_SEED` environment variable, then 0.  Exit codes: 0 success,
//! 1 assertion failure, 2 configuration error, 3 numerical non-convergence.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use dunkl::harness::{self, ExperimentConfig, ExperimentKind, HarnessError, Params};

#[derive(Parser)]
#[command(name = "dunkl-lab", version, about = "Radial Dunkl process laboratory")]
struct Cli {
    /// Worker threads for Monte Carlo runs (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct Common {
    /// JSON experiment config; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Root-system family (A | B | C | D | BC), or `laguerre` / `jacobi`
    /// for the eigenvalue processes in `simulate`.
    #[arg(long)]
    family: Option<String>,
    /// Rank / matrix dimension.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k0: Option<f64>,
    #[arg(long)]
    k1: Option<f64>,
    #[arg(long)]
    k2: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Laguerre shape parameter.
    #[arg(long)]
    delta: Option<f64>,
    /// Jacobi parameters.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    /// Starting point (comma-separated coordinates).
    #[arg(long, value_delimiter = ',')]
    x: Option<Vec<f64>>,
    /// Time horizon.
    #[arg(long)]
    t_horizon: Option<f64>,
    /// Base integration step.
    #[arg(long)]
    dt: Option<f64>,
    /// Single evaluation time (density checks).
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    n_paths: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV report path.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Optional SVG chart path.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one trajectory and write it as CSV.
    Simulate(Common),
    /// Monte Carlo survival function of the first wall-hitting time against
    /// the analytic tail.
    HittingTail(Common),
    /// Series vs determinantal transition density for reflectable B_2.
    DensityCheck(Common),
    /// Run a verification suite (operators | bessel | densities | all).
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// beta-Jacobi spectral density, cross-checked against the beta = 2
    /// determinant when applicable.
    JacobiDensity(Common),
    /// KS test of the beta-Laguerre vs squared-radial-B_m correspondence.
    LaguerreMap(Common),
}

fn merge(kind: ExperimentKind, common: Common, suite: Option<String>) -> Result<ExperimentConfig, HarnessError> {
    let mut config = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| HarnessError::Config(format!("{}: {}", path.display(), e)))?;
            let loaded = ExperimentConfig::from_json(&text)?;
            if loaded.kind != kind {
                return Err(HarnessError::Config(format!(
                    "config kind {:?} does not match the subcommand",
                    loaded.kind
                )));
            }
            loaded
        }
        None => ExperimentConfig {
            kind,
            params: Params::default(),
            n_paths: None,
            seed: None,
            output: None,
            svg: None,
        },
    };
    let flags = Params {
        family: common.family,
        m: common.m,
        k0: common.k0,
        k1: common.k1,
        k2: common.k2,
        beta: common.beta,
        delta: common.delta,
        p: common.p,
        q: common.q,
        x: common.x,
        t_horizon: common.t_horizon,
        dt: common.dt,
        t: common.t,
        suite,
    };
    config.params = config.params.clone().overridden_by(&flags);
    if common.n_paths.is_some() {
        config.n_paths = common.n_paths;
    }
    if common.seed.is_some() {
        config.seed = common.seed;
    }
    if common.output.is_some() {
        config.output = common.output;
    }
    if common.svg.is_some() {
        config.svg = common.svg;
    }
    Ok(config)
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| HarnessError::Config(format!("thread pool: {}", e)))?;
    }
    let config = match cli.command {
        Command::Simulate(c) => merge(ExperimentKind::Simulate, c, None)?,
        Command::HittingTail(c) => merge(ExperimentKind::HittingTail, c, None)?,
        Command::DensityCheck(c) => merge(ExperimentKind::DensityCheck, c, None)?,
        Command::Verify { common, suite } => {
            merge(ExperimentKind::OperatorCheck, common, Some(suite))?
        }
        Command::JacobiDensity(c) => merge(ExperimentKind::JacobiDensity, c, None)?,
        Command::LaguerreMap(c) => merge(ExperimentKind::LaguerreMap, c, None)?,
    };
    harness::run(&config)
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {}", e);
        std::process::exit(e.exit_code());
    }
}
