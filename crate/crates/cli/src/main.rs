use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use friable_cli::{default_u_range, parse_list, run, u_grid, CliError, Command, RunConfig, Suite};
use friable_core::arith::DEFAULT_BUDGET;

#[derive(Parser)]
#[command(
    name = "friable",
    version,
    about = "Friable sums, Dickman-type functions and the prime-power Selberg sieve"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Comma-separated κ values
    #[arg(long, global = true)]
    kappa: Option<String>,
    #[arg(long, global = true)]
    u_min: Option<f64>,
    #[arg(long, global = true)]
    u_max: Option<f64>,
    #[arg(long, global = true)]
    u_step: Option<f64>,
    /// Comma-separated y values
    #[arg(long, global = true)]
    y_list: Option<String>,
    /// Multiplicative-function spec (JSON), for `friable`
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// Sieve instance or array of instances (JSON), for `sieve`
    #[arg(long, global = true)]
    instance: Option<PathBuf>,
    /// CSV destination (default: stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Node budget for friable enumeration and sieve scans
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Comma-separated suites: eq73, eq82, eq711, quadratic_form, normalization
    #[arg(long, global = true)]
    suite: Option<String>,
    /// Report the exact sifted count
    #[arg(long, global = true)]
    brute: bool,
    /// Multiplies every verification tolerance
    #[arg(long, global = true, default_value_t = 1.0)]
    tol_scale: f64,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Tabulate ρ, λ, j, μ, ξ and the saddle-point approximation
    Specfn,
    /// ψ_f, ψ*_f and their envelopes over an (x, y) grid
    Friable,
    /// Run the identity and normalization suites
    Verify,
    /// Sieve bound for JSON instances
    Sieve,
    /// Time representative workloads
    Bench,
}

fn config(cli: Cli) -> Result<RunConfig, CliError> {
    let command = match cli.command {
        Cmd::Specfn => Command::Specfn,
        Cmd::Friable => Command::Friable,
        Cmd::Verify => Command::Verify,
        Cmd::Sieve => Command::Sieve,
        Cmd::Bench => Command::Bench,
    };
    let mut cfg = RunConfig::new(command);
    let (lo, hi, step) = default_u_range(command);
    cfg.u_grid = u_grid(
        cli.u_min.unwrap_or(lo),
        cli.u_max.unwrap_or(hi),
        cli.u_step.unwrap_or(step),
    )?;
    if let Some(k) = &cli.kappa {
        cfg.kappas = Some(parse_list(k, "kappa")?);
    }
    if let Some(y) = &cli.y_list {
        cfg.y_list = parse_list(y, "y")?;
    }
    if let Some(s) = &cli.suite {
        cfg.suites = parse_list::<Suite>(s, "suite")?;
    }
    cfg.input_path = match command {
        Command::Friable => cli.spec,
        Command::Sieve => cli.instance,
        _ => None,
    };
    cfg.output_path = cli.out;
    cfg.seed = cli.seed;
    cfg.budget = cli.budget;
    cfg.brute = cli.brute;
    cfg.tol_scale = cli.tol_scale;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cfg = match config(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let out = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &cfg.output_path {
        Some(p) => std::fs::write(p, &out.csv).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .write_all(out.csv.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code() as u8);
    }
    for line in &out.summary {
        eprintln!("{line}");
    }
    if out.warnings > 0 {
        eprintln!("warning: {} row(s) skipped (budget exceeded)", out.warnings);
    }
    for f in &out.failures {
        eprintln!("FAIL {f}");
    }
    ExitCode::from(out.exit_code() as u8)
}
