use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::args::{GlobalArgs, OutputFormat};
use crate::error::CliError;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Settings a config file may provide.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub output: Option<OutputFormat>,
    pub tolerance: Option<f64>,
    pub seed: Option<u64>,
    pub golden: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub timing: Option<bool>,
    pub truncation: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    }
}

/// Resolved settings: flags, then the config file, then defaults.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub output: OutputFormat,
    pub tolerance: f64,
    pub seed: u64,
    pub golden: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub timing: bool,
    pub truncation: Option<usize>,
}

impl RunConfig {
    pub fn resolve(flags: &GlobalArgs) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let tolerance = flags.tolerance.or(file.tolerance).unwrap_or(DEFAULT_TOLERANCE);
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(CliError::Usage(format!("tolerance must be positive, got {tolerance}")));
        }
        Ok(RunConfig {
            output: flags.output.or(file.output).unwrap_or(OutputFormat::Json),
            tolerance,
            seed: flags.seed.or(file.seed).unwrap_or(0),
            golden: flags.golden.clone().or(file.golden),
            out: flags.out.clone().or(file.out),
            timing: flags.timing || file.timing.unwrap_or(false),
            truncation: file.truncation,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "tolerance = 1e-3\nseed = 7\noutput = \"table\"\n").unwrap();
        let flags = GlobalArgs { config: Some(path), seed: Some(9), ..Default::default() };
        let cfg = RunConfig::resolve(&flags).unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.tolerance, 1e-3);
        assert_eq!(cfg.output, OutputFormat::Table);
    }

    #[test]
    fn defaults_without_file() {
        let cfg = RunConfig::resolve(&GlobalArgs::default()).unwrap();
        assert_eq!(cfg.tolerance, DEFAULT_TOLERANCE);
        assert_eq!(cfg.output, OutputFormat::Json);
        assert!(!cfg.timing);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_tolerance() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "tolerence = 1\n").unwrap();
        let flags = GlobalArgs { config: Some(path), ..Default::default() };
        assert!(matches!(RunConfig::resolve(&flags), Err(CliError::Parse(_))));
        let flags = GlobalArgs { tolerance: Some(-1.0), ..Default::default() };
        assert!(matches!(RunConfig::resolve(&flags), Err(CliError::Usage(_))));
    }
}
