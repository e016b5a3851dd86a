mod args;
mod commands;
mod error;
mod manifest;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use args::{Cli, Format};
use commands::{Context, Outcome};
use error::{CliError, Result};
use manifest::{now_ms, RunManifest, SCHEMA_ID};

const THREADS_VAR: &str = "ODD_RAMSEY_THREADS";

fn threads() -> Result<usize> {
    match std::env::var(THREADS_VAR) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn generated_seed() -> u64 {
    let nanos = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_nanos());
    (nanos as u64) ^ ((nanos >> 64) as u64) ^ (std::process::id() as u64).rotate_left(32)
}

fn run(cli: Cli) -> Result<i32> {
    let threads = threads()?;
    let seed = match cli.global.seed {
        Some(s) => Some(s),
        None if cli.command.is_randomized() => {
            let s = generated_seed();
            eprintln!("seed {s} (generated)");
            Some(s)
        }
        None => None,
    };
    let mut manifest = RunManifest::new(&cli.global, &cli.command, std::env::args().collect(), seed, threads);
    let ctx = Context { global: &cli.global, seed, threads };
    let Outcome { result, text, csv, code, system } = commands::run(&cli.command, &ctx)?;
    if let Some(sys) = &system {
        manifest.resolve(sys);
    }
    manifest.finished_unix_ms = now_ms();
    let report = json!({
        "schema": SCHEMA_ID,
        "command": manifest.command,
        "manifest": manifest,
        "exit_code": code,
        "result": result,
    });
    let pretty = serde_json::to_string_pretty(&report)?;
    if let Some(dir) = &cli.global.out {
        std::fs::create_dir_all(dir).map_err(CliError::io(dir))?;
        let path = dir.join(format!("{}.json", cli.command.name()));
        std::fs::write(&path, format!("{pretty}\n")).map_err(CliError::io(&path))?;
        if let Some(csv) = &csv {
            let path = dir.join(format!("{}.csv", cli.command.name()));
            std::fs::write(&path, csv).map_err(CliError::io(&path))?;
        }
    }
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let printed = match cli.global.format {
        Format::Text => lock.write_all(text.as_bytes()),
        Format::Json => writeln!(lock, "{pretty}"),
        Format::Csv => match &csv {
            Some(csv) => lock.write_all(csv.as_bytes()),
            None => return Err(CliError::Usage(format!("{} has no CSV output", cli.command.name()))),
        },
    };
    printed.map_err(CliError::io("<stdout>"))?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
