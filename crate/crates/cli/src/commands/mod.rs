pub mod bench;
pub mod friable;
pub mod sieve;
pub mod specfn;
pub mod verify;

use friable_core::numeric::fmt_e12;

use crate::config::{Command, RunConfig};
use crate::error::CliError;

/// What a command produced: the CSV body plus diagnostics for stderr.
#[derive(Clone, Debug, Default)]
pub struct Output {
    pub csv: String,
    /// Rows that could not be computed (e.g. budget exceeded).
    pub warnings: usize,
    /// Failed verification checks; nonempty means exit code 1.
    pub failures: Vec<String>,
    /// Human-readable summary lines.
    pub summary: Vec<String>,
}

impl Output {
    pub fn exit_code(&self) -> i32 {
        if self.failures.is_empty() {
            0
        } else {
            1
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Output, CliError> {
    cfg.validate()?;
    match cfg.command {
        Command::Specfn => specfn::run(cfg),
        Command::Friable => friable::run(cfg),
        Command::Verify => verify::run(cfg),
        Command::Sieve => sieve::run(cfg),
        Command::Bench => bench::run(cfg),
    }
}

pub(crate) fn csv_line(fields: &[f64]) -> String {
    fields
        .iter()
        .map(|&v| fmt_e12(v))
        .collect::<Vec<_>>()
        .join(",")
}

pub(crate) fn read_input(cfg: &RunConfig, flag: &str) -> Result<String, CliError> {
    let path = cfg
        .input_path
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("{flag} <path> is required")))?;
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}
