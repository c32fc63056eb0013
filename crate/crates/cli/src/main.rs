use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use logcy3_cli::commands::{self, CliError, CliResult};
use logcy3_cli::report::Report;

#[derive(Parser)]
#[command(name = "logcy3", version, about = "Exact invariants and Torelli comparison of log Calabi-Yau threefold pairs")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a pair document describes a valid pair.
    Validate { file: PathBuf },
    /// Lattices, cubic form, contraction types and period triviality.
    Invariants {
        file: PathBuf,
        /// Also run the randomized marking suite with this seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Marked and unmarked period tables.
    Periods {
        file: PathBuf,
        /// Comma-separated marking, one Gaussian rational per edge.
        #[arg(long, allow_hyphen_values = true)]
        marking: Option<String>,
        /// Also compare two random markings drawn with this seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Decide whether two pairs are isomorphic under a correspondence.
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// Correspondence document; the identity if omitted.
        corr: Option<PathBuf>,
        /// Number of step relabellings to try when the given one fails.
        #[arg(long, default_value_t = 1)]
        search_bound: usize,
    },
    /// Cross-check the period and the cubic form against independent paths.
    OracleCheck {
        file: PathBuf,
        /// Traverse the triangles against their orientation.
        #[arg(long)]
        flip_orientation: bool,
    },
    /// Verify a certificate from a saved `compare --json` report.
    Recheck { a: PathBuf, b: PathBuf, report: PathBuf },
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError { code: 2, message: format!("{}: {e}", path.display()) })
}

fn run(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::Validate { file } => commands::cmd_validate(&read(file)?),
        Command::Invariants { file, seed } => commands::cmd_invariants(&read(file)?, *seed),
        Command::Periods { file, marking, seed } => commands::cmd_periods(&read(file)?, marking.as_deref(), *seed),
        Command::Compare { a, b, corr, search_bound } => {
            let c = corr.as_deref().map(read).transpose()?;
            commands::cmd_compare(&read(a)?, &read(b)?, c.as_deref(), *search_bound)
        }
        Command::OracleCheck { file, flip_orientation } => commands::cmd_oracle_check(&read(file)?, *flip_orientation),
        Command::Recheck { a, b, report } => commands::cmd_recheck(&read(a)?, &read(b)?, &read(report)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            if cli.json {
                println!("{}", r.to_json());
            } else {
                print!("{}", r.to_text());
            }
            ExitCode::from(r.exit_code as u8)
        }
        Err(e) => {
            if cli.json {
                println!("{}", serde_json::json!({ "error": e.message, "exit_code": e.code }));
            } else {
                eprintln!("error: {}", e.message);
            }
            ExitCode::from(e.code as u8)
        }
    }
}
