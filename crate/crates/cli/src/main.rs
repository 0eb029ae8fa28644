//! Batch driver for the solver, data generation, training, and evaluation.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

mod commands;
mod config;

use anyhow::Result;
use clap::{Parser, Subcommand};
use config::RunConfig;
use shocknet_core::CoreError;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "shocknet", about = "First-order schemes and stencil-input networks for 1D Riemann problems", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Configuration file (TOML); each subcommand reads its own section.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Overrides the config file's root seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the config file's output directory.
    #[arg(long, global = true)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scheme (or the exact reference) and write the solution file.
    Simulate,
    /// Build a surrogate training dataset.
    Gendata,
    /// Train a surrogate or physics-residual network.
    Train,
    /// Evaluate a trained surrogate over perturbation cases.
    Evaluate,
    /// Write plot-ready prediction/input/exact overlays.
    #[command(name = "export-plot")]
    ExportPlot,
}

fn load_config(path: Option<&str>) -> Result<RunConfig> {
    let path = path.ok_or_else(|| anyhow::anyhow!("--config <file> is required"))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read config '{path}': {e}"))?;
    let cfg: RunConfig =
        toml::from_str(&text).map_err(|e| anyhow::anyhow!("bad config '{path}': {e}"))?;
    Ok(cfg)
}

fn missing_section(name: &str) -> anyhow::Error {
    anyhow::anyhow!("config file has no [{name}] section")
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = load_config(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = cli.out {
        cfg.out_dir = out;
    }
    match cli.command {
        Command::Simulate => {
            let c = cfg.simulate.as_ref().ok_or_else(|| missing_section("simulate"))?;
            commands::cmd_simulate(c, cfg.seed, &cfg.out_dir)
        }
        Command::Gendata => {
            let c = cfg.gendata.as_ref().ok_or_else(|| missing_section("gendata"))?;
            commands::cmd_gendata(c, cfg.seed, &cfg.out_dir)
        }
        Command::Train => {
            let c = cfg.train.as_ref().ok_or_else(|| missing_section("train"))?;
            commands::cmd_train(c, cfg.seed, &cfg.out_dir)
        }
        Command::Evaluate => {
            let c = cfg.evaluate.as_ref().ok_or_else(|| missing_section("evaluate"))?;
            commands::cmd_evaluate(c, cfg.seed, &cfg.out_dir)
        }
        Command::ExportPlot => {
            let c = cfg.export_plot.as_ref().ok_or_else(|| missing_section("export-plot"))?;
            commands::cmd_export_plot(c, cfg.seed, &cfg.out_dir)
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<CoreError>() {
        Some(CoreError::Domain(_)) | Some(CoreError::Numerical(_)) | Some(CoreError::Io(_)) => 3,
        Some(_) => 2,
        // Argument/config parsing problems.
        None => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
