#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cli;
mod commands;
mod error;
mod input;
mod manifest;
mod output;

use std::fs;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use cli::Cli;
use commands::{Body, Outcome};
use error::CliResult;
use manifest::RunManifest;

fn emit(cli: &Cli, outcome: &Outcome) -> CliResult<()> {
    let text = match &outcome.body {
        Body::Json(v) => output::to_json_string(v)?,
        Body::Csv(t) => t.to_csv()?,
    };
    match &cli.output {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn execute(cli: &Cli) -> CliResult<()> {
    let start = Instant::now();
    let outcome = commands::run(&cli.command, cli.seed)?;
    emit(cli, &outcome)?;
    if let Some(path) = &cli.manifest {
        let arguments = serde_json::to_value(&cli.command)?;
        let m = RunManifest {
            command: arguments["subcommand"].as_str().unwrap_or_default().to_string(),
            arguments,
            tolerances: outcome.tolerances,
            seed: cli.seed,
            versions: RunManifest::versions(),
            wall_time_seconds: start.elapsed().as_secs_f64(),
            outputs: outcome.outputs,
        };
        fs::write(path, output::to_json_string(&m)?)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let text = output::to_json_string(&e.to_json()).unwrap_or_else(|_| format!("{e}\n"));
            let _ = std::io::stderr().lock().write_all(text.as_bytes());
            ExitCode::from(1)
        }
    }
}
