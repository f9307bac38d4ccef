//! Command-line driver for building, querying and benchmarking indexes.
//!
//! Exit codes: 0 success, 1 i/o or other failure, 2 usage, 3 malformed
//! input data, 4 violated invariant.

pub mod args;
pub mod config;

mod commands;
mod data;

use anyhow::Result;
use nhq::{ErrorKind, NhqError};

use args::{Cli, Command};
use config::RunConfig;

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_FORMAT: u8 = 3;
pub const EXIT_INVARIANT: u8 = 4;

/// Merges the config file, global flags and subcommand flags, in rising
/// precedence.
pub fn resolve(cli: &Cli) -> Result<RunConfig> {
    let file = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(cmd) = &file.command {
        if cmd != cli.command.name() {
            log::warn!("config was echoed by `{cmd}`, running `{}`", cli.command.name());
        }
    }
    let merged = file.overlay(&cli.common)?;
    let mut cfg = match &cli.command {
        Command::Build(c) => merged.overlay(c)?,
        Command::Gt(c) => merged.overlay(c)?,
        Command::Search(c) => merged.overlay(c)?,
        Command::Bench(c) => merged.overlay(c)?,
        Command::GenAttrs(c) => merged.overlay(c)?,
        Command::GenVectors(c) => merged.overlay(c)?,
    };
    cfg.command = Some(cli.command.name().to_string());
    Ok(cfg)
}

pub fn run(cli: &Cli) -> Result<()> {
    let mut cfg = resolve(cli)?;
    match cli.command {
        Command::Build(_) => commands::cmd_build(&mut cfg),
        Command::Gt(_) => commands::cmd_gt(&mut cfg),
        Command::Search(_) => commands::cmd_search(&mut cfg),
        Command::Bench(_) => commands::cmd_bench(&mut cfg),
        Command::GenAttrs(_) => commands::cmd_gen_attrs(&mut cfg),
        Command::GenVectors(_) => commands::cmd_gen_vectors(&mut cfg),
    }
}

pub fn exit_code(err: &anyhow::Error) -> u8 {
    err.chain()
        .find_map(|e| e.downcast_ref::<NhqError>())
        .map_or(EXIT_FAILURE, |e| match e.kind() {
            ErrorKind::Usage => EXIT_USAGE,
            ErrorKind::Format => EXIT_FORMAT,
            ErrorKind::Invariant => EXIT_INVARIANT,
            ErrorKind::Io => EXIT_FAILURE,
        })
}
