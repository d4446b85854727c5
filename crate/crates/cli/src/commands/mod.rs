pub mod conv;
pub mod forms;
pub mod ft;
pub mod hecke;
pub mod invariants;
pub mod lfun;

use std::path::Path;

use hoforms::forms::QExpansion;
use serde::Serialize;
use serde_json::Value;

use crate::args::Command;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::Report;

pub fn run(command: &Command, cfg: &RunConfig) -> Result<Report, CliError> {
    match command {
        Command::Invariants(a) => invariants::run(a, cfg),
        Command::Hecke(a) => hecke::run(a, cfg),
        Command::Ft(a) => ft::run(a, cfg),
        Command::Lfun(a) => lfun::run(a, cfg),
        Command::Conv(a) => conv::run(a, cfg),
        Command::Forms(a) => forms::run(a, cfg),
    }
}

/// File contents; an empty file is a parse error.
pub fn read_input(path: &Path) -> Result<String, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    if text.trim().is_empty() {
        return Err(CliError::Parse(format!("{}: empty input file", path.display())));
    }
    Ok(text)
}

pub fn load_form(path: &Path) -> Result<QExpansion, CliError> {
    Ok(QExpansion::from_json(&read_input(path)?)?)
}

pub fn to_value<T: Serialize>(x: &T) -> Result<Value, CliError> {
    serde_json::to_value(x).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn json_text(text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}
