//! `collatz-fp`: command-line front end for the verification sweeps.
//!
//! Exit codes: 0 success, 1 findings (violations or cap exceeded), 2 usage
//! or I/O error, 3 arithmetic overflow.

mod args;
mod commands;
mod render;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::{CliError, Outcome};

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.jobs {
        None => commands::run(cli.command),
        Some(0) => Err(collatz_fp::Error::InvalidArgument("--jobs must be at least 1".into()).into()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| collatz_fp::Error::InvalidArgument(e.to_string()))?
            .install(|| commands::run(cli.command)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(cli) {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Findings) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
