use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use swapsim::cli::{cmd_explain, cmd_run, cmd_verify, FileConfig, RunConfig};
use swapsim::detect::DetectionOutcome;
use swapsim::report::{render_explain_text, render_text, render_verify_text};
use swapsim::{Error, Result};

#[derive(Parser)]
#[command(
    name = "swapsim",
    version,
    about = "Simulates and certifies coincidence-conditioned photon-pair interference"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the pipeline: conditioned states, entanglement measures,
    /// optimized Bell fidelities, and the event-ready verdict.
    Run(CommonArgs),
    /// Recompute every number through the exact reference route and compare;
    /// exits nonzero on any disagreement.
    Verify(CommonArgs),
    /// Walk one detection outcome from emission to conditioned state with
    /// exact coefficients.
    Explain {
        /// Detector outcome, e.g. "xy" or "x,y".
        #[arg(long)]
        outcome: String,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Pair amplitude, strictly between 0 and 1.
    #[arg(long)]
    xi: Option<f64>,
    /// Pair expansion order per source, 1 to 3.
    #[arg(long)]
    order: Option<u32>,
    /// Comma-separated pair amplitudes for the event-ready scaling check.
    #[arg(long, value_delimiter = ',')]
    xi_grid: Option<Vec<f64>>,
    /// Optimizer restarts per fidelity maximization.
    #[arg(long)]
    restarts: Option<u32>,
    /// Optimizer seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Tolerance for spectral cross-checks.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Output format.
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Write the rendered output to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML file with configuration defaults; explicit flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Structured,
}

impl CommonArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            FileConfig::load(path)?.apply(&mut cfg);
        }
        if let Some(xi) = self.xi {
            cfg.xi = xi;
        }
        if let Some(order) = self.order {
            cfg.order = order;
        }
        if let Some(grid) = &self.xi_grid {
            cfg.xi_grid = grid.clone();
        }
        if let Some(restarts) = self.restarts {
            cfg.restarts = restarts;
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(tolerance) = self.tolerance {
            cfg.tolerance = tolerance;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn emit(&self, rendered: String) -> Result<()> {
        match &self.out {
            Some(path) => {
                std::fs::write(path, rendered)?;
                eprintln!("report written to {}", path.display());
            }
            None => print!("{rendered}"),
        }
        Ok(())
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Runs one subcommand; `Ok(false)` means a clean run whose verdict failed.
fn dispatch(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Run(common) => {
            let cfg = common.resolve()?;
            let report = cmd_run(&cfg)?;
            let rendered = match common.format {
                Format::Text => render_text(&report),
                Format::Structured => to_json(&report)?,
            };
            common.emit(rendered)?;
            Ok(true)
        }
        Command::Verify(common) => {
            let cfg = common.resolve()?;
            let report = cmd_verify(&cfg)?;
            let rendered = match common.format {
                Format::Text => render_verify_text(&report),
                Format::Structured => to_json(&report)?,
            };
            common.emit(rendered)?;
            Ok(report.pass)
        }
        Command::Explain { outcome, common } => {
            let cfg = common.resolve()?;
            let outcome: DetectionOutcome = outcome.parse()?;
            let report = cmd_explain(&cfg, outcome)?;
            let rendered = match common.format {
                Format::Text => render_explain_text(&report),
                Format::Structured => to_json(&report)?,
            };
            common.emit(rendered)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
