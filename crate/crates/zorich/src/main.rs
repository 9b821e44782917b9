use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use zorich::commands::{self, Failure, Outcome};
use zorich::config::{Overrides, RunConfig};
use zorich::parallel::thread_pool;

/// Zorich maps: dimension bounds, orbit classification and attractor sampling.
///
/// Exit codes: 0 success, 1 precondition failure, 2 only one dimension
/// certificate holds, 3 verification failure.
#[derive(Parser, Debug)]
#[command(name = "zorich", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Dimension d >= 2.
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Half side of the parameter cube (default pi/2 for d = 2, else 1).
    #[arg(long, global = true)]
    rho: Option<f64>,
    /// Parameter a of f_a = F - a e_d.
    #[arg(long = "a", global = true)]
    a: Option<f64>,
    /// Target contraction factor alpha in (0, 1).
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Lattice radius N.
    #[arg(long = "lattice-N", global = true)]
    lattice_n: Option<u64>,
    /// Cap on the lattice radius of the lower-bound schedule.
    #[arg(long = "n-cap", global = true)]
    n_cap: Option<u64>,
    /// Replace all sampled dilation constants by 1.
    #[arg(long = "unit-constants", global = true)]
    unit_constants: bool,
    /// Seed of the chaos-game generator.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON configuration file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: ZORICH_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Upper and lower Hausdorff dimension bounds, written to bounds.json.
    Bounds,
    /// Label a grid of starting points by orbit behaviour (classify.csv/json).
    Classify,
    /// Sample the IFS limit set and estimate its box dimension (attractor.csv/json).
    Attractor,
    /// Run the invariant suite (verify.json); exit 3 if any check fails.
    Verify {
        /// Negative control: multiply c4 by this factor before checking.
        #[arg(long = "perturb-c4", hide = true)]
        perturb_c4: Option<f64>,
    },
    /// Evaluate a lattice sum and its bracket; JSON on stdout.
    Sum {
        #[arg(long = "t")]
        t: f64,
        #[arg(long = "b")]
        b: f64,
    },
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let c = &cli.common;
    let overrides = Overrides {
        dim: c.dim,
        rho: c.rho,
        a: c.a,
        alpha: c.alpha,
        lattice_n: c.lattice_n,
        n_cap: c.n_cap,
        unit_constants: c.unit_constants,
        seed: c.seed,
        out: c.out.clone(),
    };
    let mut cfg = RunConfig::load(c.config.as_deref(), &overrides).map_err(Failure::precondition)?;
    if let Command::Verify { perturb_c4: Some(p) } = cli.command {
        cfg.perturb_c4 = Some(p);
        cfg.validate().map_err(Failure::precondition)?;
    }
    thread_pool(c.threads).install(|| match &cli.command {
        Command::Bounds => commands::cmd_bounds(&cfg),
        Command::Classify => commands::cmd_classify(&cfg),
        Command::Attractor => commands::cmd_attractor(&cfg),
        Command::Verify { .. } => commands::cmd_verify(&cfg),
        Command::Sum { t, b } => commands::cmd_sum(&cfg, *t, *b),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            for f in &outcome.files {
                eprintln!("wrote {}", f.display());
            }
            ExitCode::from(outcome.code as u8)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code as u8)
        }
    }
}
