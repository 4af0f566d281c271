mod cli;
mod commands;
mod config;
mod error;
mod initial;
mod output;

use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Command, Common};
use config::Config;
use error::CliError;

/// defaults, then the config file, then flags.
fn layered(defaults: Config, common: &Common, flags: Config) -> Result<Config, CliError> {
    let file = match &common.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    Ok(defaults.layer(file).layer(flags))
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let env_cap = std::env::var("FKDV_NUM_THREADS").ok();
    let env_cap = env_cap.as_deref();
    match cli.command {
        Command::Solve(a) => commands::solve(layered(config::run_defaults(), &a.common, a.overrides())?, env_cap),
        Command::Invariants(a) => {
            commands::invariants(layered(config::run_defaults(), &a.common, a.overrides())?, env_cap)
        }
        Command::Converge(a) => commands::converge(layered(config::converge_defaults(), &a.common, a.overrides())?, env_cap),
        Command::Zdl(a) => {
            // `full` picks the defaults, so it has to be known before layering.
            let file_full = match &a.common.config {
                Some(p) => Config::load(p)?.is_full(),
                None => false,
            };
            let defaults = config::zdl_defaults(a.common.full || file_full);
            commands::zdl(layered(defaults, &a.common, a.overrides())?, env_cap)
        }
        Command::Reference(a) => {
            commands::reference(layered(config::reference_defaults(), &a.common, a.overrides())?, env_cap)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fkdv: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
