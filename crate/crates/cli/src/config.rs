use std::path::PathBuf;
use std::str::FromStr;

use friable_core::arith::DEFAULT_BUDGET;

use crate::commands::verify::Suite;
use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Specfn,
    Friable,
    Verify,
    Sieve,
    Bench,
}

/// Fully resolved settings for one invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub input_path: Option<PathBuf>,
    pub output_path: Option<PathBuf>,
    /// None when --kappa was not given; each command picks its own default.
    pub kappas: Option<Vec<f64>>,
    pub u_grid: Vec<f64>,
    pub y_list: Vec<f64>,
    pub seed: u64,
    pub budget: usize,
    pub suites: Vec<Suite>,
    pub brute: bool,
    /// Multiplies every verification tolerance.
    pub tol_scale: f64,
}

impl RunConfig {
    /// Defaults for `command`: the command's u grid, y ∈ {10², 10³}, seed 0,
    /// every suite.
    pub fn new(command: Command) -> Self {
        let (lo, hi, step) = default_u_range(command);
        RunConfig {
            command,
            input_path: None,
            output_path: None,
            kappas: None,
            u_grid: u_grid(lo, hi, step).expect("default grid"),
            y_list: vec![1e2, 1e3],
            seed: 0,
            budget: DEFAULT_BUDGET,
            suites: Suite::ALL.to_vec(),
            brute: false,
            tol_scale: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.kappas.as_ref().is_some_and(Vec::is_empty) {
            return Err(CliError::Usage("the kappa list is empty".into()));
        }
        if self.u_grid.is_empty() || self.y_list.is_empty() {
            return Err(CliError::Usage("grid ranges must be nonempty".into()));
        }
        if self.suites.is_empty() {
            return Err(CliError::Usage("no verification suite selected".into()));
        }
        if !(self.tol_scale >= 0.0) {
            return Err(CliError::Usage(format!(
                "tolerance scale {} must be >= 0",
                self.tol_scale
            )));
        }
        if self.budget == 0 {
            return Err(CliError::Usage("budget must be positive".into()));
        }
        Ok(())
    }
}

pub fn default_u_range(command: Command) -> (f64, f64, f64) {
    match command {
        Command::Friable => (1.0, 3.0, 0.5),
        _ => (0.0, 10.0, 0.5),
    }
}

/// u_min, u_min + step, ... up to u_max (inclusive, with a relative slack of
/// 1e-9 steps so that decimal steps land on the endpoint).
pub fn u_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0) || !lo.is_finite() || !hi.is_finite() || hi < lo {
        return Err(CliError::Usage(format!(
            "empty u range [{lo}, {hi}] with step {step}"
        )));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| lo + i as f64 * step).collect())
}

/// Comma-separated values; an empty string gives an empty list.
pub fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| CliError::Usage(format!("cannot parse {what} value {t:?}")))
        })
        .collect()
}
