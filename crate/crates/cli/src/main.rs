//! swcp: simulation and exact analysis of the discrete-time contact
//! process on small-world and big-world graphs.
//!
//! Exit codes: 0 success, 2 invalid config, 3 resource guard tripped.

mod commands;
mod config;
mod manifest;
mod output;

use clap::{Args, Parser, Subcommand};
use config::Config;
use output::OutDir;
use std::path::PathBuf;
use std::process::ExitCode;
use swcp_core::Error;

#[derive(Parser)]
#[command(
    name = "swcp",
    version,
    about = "Contact process on small worlds: critical values, stopping times, metastability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config file (flat `key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Master seed; overrides the config `seed` key.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; overrides the config `workers` key.
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory; overrides the config `out_dir` key.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form critical values and K_M lower bounds.
    CriticalValues(Common),
    /// Bisect lambda_1 and lambda_2 on the big world.
    PhaseGap(Common),
    /// Stopping-time distributions: small worlds against the big world.
    TauConvergence(Common),
    /// Survival from all-ones on the modified small world.
    Metastability(Common),
    /// Growth rate of E|B_t| over a lambda grid.
    GrowthRate(Common),
    /// Raw single-run trajectory dump.
    Simulate(Common),
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::CriticalValues(c)
            | Command::PhaseGap(c)
            | Command::TauConvergence(c)
            | Command::Metastability(c)
            | Command::GrowthRate(c)
            | Command::Simulate(c) => c,
        }
    }
}

fn resolve_config(common: &Common) -> swcp_core::Result<(Config, OutDir)> {
    let mut config = Config::from_file(&common.config)?;
    if let Some(seed) = common.seed {
        config.set("seed", seed.to_string());
    }
    if let Some(workers) = common.workers {
        config.set("workers", workers.to_string());
    }
    if let Some(out) = &common.out {
        config.set("out_dir", out.display().to_string());
    }
    let out_dir = config
        .get_str("out_dir")
        .ok_or_else(|| {
            Error::invalid_parameter("no output directory: set `out_dir` or pass --out")
        })?
        .to_string();
    let workers = config.get_u64("workers", 0)?;
    if workers > 0 {
        // Ignore the error if a global pool already exists.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers as usize)
            .build_global();
    }
    let out = OutDir::create(std::path::Path::new(&out_dir))?;
    Ok((config, out))
}

fn dispatch(cli: &Cli) -> swcp_core::Result<()> {
    let (config, out) = resolve_config(cli.command.common())?;
    match &cli.command {
        Command::CriticalValues(_) => commands::critical_values::run(&config, &out),
        Command::PhaseGap(_) => commands::phase_gap::run(&config, &out),
        Command::TauConvergence(_) => commands::tau_convergence::run(&config, &out),
        Command::Metastability(_) => commands::metastability::run(&config, &out),
        Command::GrowthRate(_) => commands::growth_rate::run(&config, &out),
        Command::Simulate(_) => commands::simulate::run(&config, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err @ Error::ResourceGuard { .. }) => {
            eprintln!("swcp: {err}");
            ExitCode::from(3)
        }
        Err(err) => {
            eprintln!("swcp: {err}");
            ExitCode::from(2)
        }
    }
}
