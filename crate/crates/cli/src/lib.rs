//! Command-line surface of the corpus toolkit.
//!
//! Exit codes are listed in [`error::exit`].

pub mod args;
pub mod canned;
pub mod commands;
pub mod config;
pub mod error;

use args::{Cli, Command};
use clap::Parser;
use commands::Ctx;
use config::RunConfig;
use error::{exit, CliError};
use std::ffi::OsString;

/// Run one command and map the outcome to an exit code.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::CONFIG } else { exit::OK };
        }
    };
    match dispatch(cli) {
        Ok(()) => exit::OK,
        Err(e) => {
            eprintln!("bibcorpus: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let ctx = Ctx { config, db: cli.db };
    match &cli.command {
        Command::Ingest(a) => commands::ingest(&ctx, a),
        Command::Query(a) => commands::query(&ctx, a),
        Command::ListQueries => commands::list_queries(),
        Command::Keywords(a) => commands::keywords(&ctx, a),
        Command::Trends(a) => commands::trends(&ctx, a),
        Command::Emerging(a) => commands::emerging(&ctx, a),
        Command::Community(a) => commands::community(&ctx, a),
        Command::Policies(a) => commands::policies(&ctx, a),
        Command::Stats => commands::stats(&ctx),
    }
}
