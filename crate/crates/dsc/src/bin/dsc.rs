//! Batch CLI over the experiment runner: one subcommand per experiment,
//! JSON config in, CSV/JSON out. `DSC_LOG={error|info|debug}` controls
//! stderr diagnostics.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dsc::runner::{self, ExperimentConfig, RunOutcome};

#[derive(Parser)]
#[command(
    name = "dsc",
    version,
    about = "mean counting functions and composition-operator diagnostics for Dirichlet series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON experiment config
    #[arg(long)]
    config: PathBuf,
    /// worker threads (default: logical cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// override the config seed
    #[arg(long)]
    seed: Option<u64>,
    /// output directory (default: current directory)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Mean counting estimates along the window/abscissa schedule
    Count(Common),
    /// Jessen function values and its right-derivative
    Jessen(Common),
    /// Integral identities between weighted and unweighted counts
    Identity(Common),
    /// Monte Carlo average of unit-window counts over the polytorus
    Polytorus(Common),
    /// Change-of-variables verification for the composed-series norm
    Stanton(Common),
    /// Reproducing-kernel norms and the zeta-like singular decomposition
    Kernel(Common),
    /// Schwarz-lemma constant for characteristic-zero symbols
    Schwarz(Common),
    /// Littlewood-type bound for the weight-1 counting function
    Littlewood(Common),
    /// Boundary ratio profiles (compactness/boundedness conditions)
    Ratio(Common),
    /// Submean-value comparison over disks
    Submean(Common),
    /// Half-strip transference sandwich
    Transfer(Common),
}

impl Command {
    fn split(&self) -> (&'static str, &Common) {
        match self {
            Command::Count(c) => ("count", c),
            Command::Jessen(c) => ("jessen", c),
            Command::Identity(c) => ("identity", c),
            Command::Polytorus(c) => ("polytorus", c),
            Command::Stanton(c) => ("stanton", c),
            Command::Kernel(c) => ("kernel", c),
            Command::Schwarz(c) => ("schwarz", c),
            Command::Littlewood(c) => ("littlewood", c),
            Command::Ratio(c) => ("ratio", c),
            Command::Submean(c) => ("submean", c),
            Command::Transfer(c) => ("transfer", c),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (subcommand, common) = cli.command.split();

    if let Some(jobs) = common.jobs {
        // a late or repeated initialization is harmless; the pool is global
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }

    let mut config = match ExperimentConfig::from_file(&common.config) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("dsc: {e}");
            return ExitCode::from(2);
        }
    };
    if config.experiment.subcommand() != subcommand {
        eprintln!(
            "dsc: config drives the {:?} experiment; run it via `dsc {}`",
            config.experiment,
            config.experiment.subcommand()
        );
        return ExitCode::from(2);
    }
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    let out_dir = common.out.clone().unwrap_or_else(|| PathBuf::from("."));

    match runner::run(&config, &out_dir) {
        Ok(report) => {
            for flag in &report.flags {
                eprintln!("dsc: flag: {flag}");
            }
            for path in &report.outputs {
                println!("{}", path.display());
            }
            match report.outcome {
                RunOutcome::Clean | RunOutcome::DivergenceFlagged => ExitCode::SUCCESS,
                RunOutcome::NonConvergence => ExitCode::from(3),
            }
        }
        Err(e) => {
            eprintln!("dsc: {e}");
            ExitCode::from(runner::exit_code_for_error(&e) as u8)
        }
    }
}
