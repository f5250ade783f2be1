use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

mod commands;
mod manifest;
mod output;

use commands::{AutocorrArgs, CheckArgs, ConstructArgs, DesignArgs, SearchArgs};

/// Difference balanced functions GF(q^n)* → GF(q).
///
/// Exit status: 0 when every verdict is true, 1 when a verdict is false (the
/// report is still written), 2 on usage or I/O errors.
#[derive(Parser, Debug)]
#[command(name = "dbf", version, args_conflicts_with_subcommands = true)]
struct Cli {
    /// Check that FILE is a JSON document produced by this tool
    #[arg(long, value_name = "FILE")]
    validate: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a function table and write it as JSON
    Construct(ConstructArgs),
    /// Balance, difference balance, homogeneity, two-tuple balance
    Check(CheckArgs),
    /// Generalized, relative, divisible and Singer difference sets; characters; multipliers
    Design(DesignArgs),
    /// Periodic autocorrelation of the sequence f(θ^i) (q = p)
    Autocorr(AutocorrArgs),
    /// Enumerate difference balanced functions
    Search(SearchArgs),
}

fn validate(path: &PathBuf) -> Result<u8> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(match output::validate(&text) {
        Ok(kind) => {
            println!("{}: valid {}", path.display(), serde_json::to_value(kind)?.as_str().unwrap_or("document"));
            0
        }
        Err(e) => {
            println!("{}: invalid: {e:#}", path.display());
            1
        }
    })
}

fn run(cli: Cli) -> Result<u8> {
    match (&cli.validate, &cli.command) {
        (Some(path), _) => validate(path),
        (None, Some(Command::Construct(args))) => commands::construct(args),
        (None, Some(Command::Check(args))) => commands::check(args),
        (None, Some(Command::Design(args))) => commands::design(args),
        (None, Some(Command::Autocorr(args))) => commands::autocorr(args),
        (None, Some(Command::Search(args))) => commands::search(args),
        (None, None) => anyhow::bail!("a subcommand or --validate is required (see --help)"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
