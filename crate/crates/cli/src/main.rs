use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use laumon_cli::config::{Overrides, RunConfig};
use laumon_cli::run::run;
use laumon_cli::Result;

/// Exact affine Laumon partition functions by localization, the Calogero-Moser eigenfunction
/// and Verma module traces.
#[derive(Parser)]
#[command(name = "laumon", version)]
struct Cli {
    /// Flat `key = value` config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

fn execute(cli: Cli) -> Result<bool> {
    let base = match &cli.config {
        Some(path) => Overrides::from_file_contents(&std::fs::read_to_string(path)?)?,
        None => Overrides::default(),
    };
    let config = RunConfig::resolve(cli.overrides.over(base))?;
    let report = run(&config)?;
    let json = serde_json::to_string_pretty(&report)?;
    match &config.out {
        Some(path) => std::fs::write(path, json + "\n")?,
        None => println!("{json}"),
    }
    let failed: Vec<_> = report.failures().collect();
    eprintln!("ledger {}: {} checks, {} failed", report.ledger, report.checks.len(), failed.len());
    for c in failed {
        eprintln!("  FAIL {}: {} vs {}", c.name, c.lhs, c.rhs);
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
