//! Command-line front end: state construction, file ingestion, witness
//! evaluation and parameter sweeps with reproducible outputs.

pub mod args;
pub mod commands;
pub mod error;
pub mod manifest;
pub mod output;
pub mod sweep;
pub mod units;

use std::fs;

use crate::args::Cli;
use crate::commands::{command_name, execute};
use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;
use crate::output::Format;

pub const THREADS_ENV: &str = "ENTROBOUND_THREADS";

/// Sizes the global rayon pool from `ENTROBOUND_THREADS` when set.
pub fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::validation(format!(
            "{THREADS_ENV} must be a positive integer, got `{raw}`"
        ))
    })?;
    // a pool may already exist when called twice in one process
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

/// Runs the command and returns the rendered output. When `--out` is set
/// the output and its manifest are written to disk and nothing is returned.
pub fn run(cli: &Cli) -> CliResult<Option<String>> {
    let result = execute(cli)?;
    let text = result.payload.render(cli.format)?;
    let Some(out) = &cli.out else {
        return Ok(Some(text));
    };
    fs::write(out, &text).map_err(|e| CliError::validation(format!("{}: {e}", out.display())))?;
    let format = match (cli.format, &result.payload) {
        (Some(Format::Json), _) | (None, output::Payload::Report(_)) => "json",
        _ => "csv",
    };
    RunManifest::new(
        command_name(&cli.command),
        &result.inputs,
        result.parameters,
        result.seed,
        format,
    )?
    .write_for(out)?;
    Ok(None)
}
