//! Driver for `sdq-core`: reads a TOML run configuration, executes one
//! command and writes a CSV or JSON report.
//!
//! Exit codes: 0 success or check passed, 1 check failed, 2 input error,
//! 3 resource cap exceeded.

pub mod commands;
pub mod config;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use commands::{cmd_kms, cmd_quantize, cmd_resolvent, cmd_sweep};
pub use config::Format;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Cap(_) => 3,
        }
    }
}

impl From<sdq_core::Error> for CliError {
    fn from(e: sdq_core::Error) -> Self {
        match e {
            sdq_core::Error::DimensionCap { .. } => CliError::Cap(e.to_string()),
            sdq_core::Error::Parse(p) => CliError::Input(format!("polynomial parse error: {p}")),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Pass,
    CheckFailed(String),
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::CheckFailed(_) => 1,
        }
    }
}

/// Command-line overrides; flags win over config keys.
#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub check: bool,
}

/// Resolved output settings for one run.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub format: Format,
    pub check: bool,
}

impl RunOptions {
    pub fn resolve(flags: &Flags, out: Option<&PathBuf>, format: Option<Format>) -> Self {
        Self {
            out: flags.out.clone().or_else(|| out.cloned()),
            format: flags.format.or(format).unwrap_or(Format::Csv),
            check: flags.check,
        }
    }

    /// Writes the main report to `--out` or stdout.
    pub fn emit(&self, content: &str) -> Result<(), CliError> {
        match &self.out {
            Some(path) => write_file(path, content),
            None => {
                print!("{content}");
                Ok(())
            }
        }
    }

    /// Writes `<out stem>.<suffix>` next to the report. Without an output
    /// path the sidecar goes to stderr.
    pub fn emit_sidecar(&self, suffix: &str, content: &str) -> Result<(), CliError> {
        match &self.out {
            Some(path) => write_file(&path.with_extension(suffix), content),
            None => {
                eprint!("{content}");
                Ok(())
            }
        }
    }
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Quantize,
    Sweep,
    Kms,
    Resolvent,
}

/// Parses `config_text` for `command` and runs it.
pub fn run(command: CommandKind, config_text: &str, flags: &Flags) -> Result<Outcome, CliError> {
    match command {
        CommandKind::Quantize => cmd_quantize(&config::parse_config(config_text)?, flags),
        CommandKind::Sweep => cmd_sweep(&config::parse_sweep_config(config_text)?, flags),
        CommandKind::Kms => cmd_kms(&config::parse_config(config_text)?, flags),
        CommandKind::Resolvent => cmd_resolvent(&config::parse_config(config_text)?, flags),
    }
}

/// Pretty JSON with a trailing newline.
pub(crate) fn json_text(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON value serializes");
    s.push('\n');
    s
}
