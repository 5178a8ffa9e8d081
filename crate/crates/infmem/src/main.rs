use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use infmem::{ExperimentConfig, RunError};

/// Reproducible experiments on chains with infinite memory.
#[derive(Parser)]
#[command(name = "infmem", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads (default: one per CPU).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory, overriding the config.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed, overriding the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task of a config (or of a manifest's resolved config).
    Run { config: PathBuf },
    /// Parse a config and build its model without running anything.
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: Cli) -> Result<u8, RunError> {
    match cli.command {
        Command::Validate { config } => {
            let c = ExperimentConfig::load(&config)?.resolved(cli.seed, cli.output);
            let m = c.validate()?;
            println!("ok: model {} (a = {}), {} task(s)", m.name(), m.a(), c.tasks.len());
            Ok(0)
        }
        Command::Run { config } => {
            if cli.threads == Some(0) {
                return Err(RunError::Config("--threads must be at least 1".into()));
            }
            let c = ExperimentConfig::load(&config)?.resolved(cli.seed, cli.output);
            let summary = infmem::run(c, cli.threads)?;
            for (task, pass) in &summary.verdicts {
                println!("{task}: {}", if *pass { "pass" } else { "fail" });
            }
            println!("manifest: {}", summary.manifest.display());
            Ok(if summary.pass { 0 } else { 1 })
        }
    }
}
