mod args;
mod commands;
mod config;
mod error;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use crate::args::{Cli, OutputFormat};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{golden_drift, render_table};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("hoforms: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

/// Runs the command, emits the report, and returns whether every check passed.
fn run(cli: &Cli) -> Result<bool, CliError> {
    let cfg = RunConfig::resolve(&cli.global)?;
    let start = Instant::now();
    let report = commands::run(&cli.command, &cfg)?;
    let wall = cfg.timing.then(|| start.elapsed().as_secs_f64());
    let mut value = report.to_value(&cfg, wall);
    let mut pass = report.passed();
    if let Some(path) = &cfg.golden {
        let golden = commands::json_text(&commands::read_input(path)?)?;
        let drift = golden_drift(&value, &golden, cfg.tolerance);
        pass &= drift.is_empty();
        value["golden"] = serde_json::json!({ "path": path.display().to_string(), "drift": drift });
        value["pass"] = serde_json::json!(pass);
    }
    let text = match cfg.output {
        OutputFormat::Json => serde_json::to_string_pretty(&value).expect("serializable") + "\n",
        OutputFormat::Table => render_table(&value),
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?,
    }
    Ok(pass)
}
