use friable_core::arith::{
    envelopes, f1y, psi_f_with_budget, rankin_bound, MultiplicativeSpec, SpecKind,
};
use friable_core::numeric::fmt_e12;
use friable_core::{ArithError, Kappa, RhoTable};
use rayon::prelude::*;

use super::{csv_line, read_input, Output};
use crate::config::RunConfig;
use crate::error::CliError;

pub const HEADER: &str =
    "x,y,u,psi,f1y,psi_star,lambda_u,deviation,envelope_thm31,envelope_thm32,rankin_bound,status";

/// κ for the grid: an explicit --kappa wins, otherwise the one implied by
/// the spec (κ for τ_κ, c for f(p) = c, else 1).
fn kappa_for(cfg: &RunConfig, spec: &MultiplicativeSpec) -> Result<Kappa, CliError> {
    let k = match (cfg.kappas.as_deref(), spec.kind()) {
        (Some([k]), _) => *k,
        (Some(_), _) => return Err(CliError::Usage("friable takes a single kappa".into())),
        (None, SpecKind::TauKappa { kappa }) => *kappa,
        (None, SpecKind::SquarefreeUniform { c }) => *c,
        (None, _) => 1.0,
    };
    Kappa::new(k).map_err(|e| CliError::Usage(format!("{e}; pass --kappa")))
}

enum Row {
    Done(String),
    Skipped(String),
}

fn point(
    x: f64,
    y: f64,
    u: f64,
    kappa: Kappa,
    spec: &MultiplicativeSpec,
    table: &RhoTable,
    budget: usize,
) -> Result<Row, CliError> {
    let key = csv_line(&[x, y, u]);
    let psi = match psi_f_with_budget(x, y, spec, budget) {
        Ok(v) => v,
        Err(ArithError::BudgetExceeded { .. }) => {
            return Ok(Row::Skipped(format!("{key},,,,,,,,,skipped")))
        }
        Err(e) => return Err(e.into()),
    };
    let f = f1y(y, spec)?;
    let star = (f - psi).max(0.0);
    let lambda = table.lambda(u)?;
    // envelopes need x >= y >= 3; Rankin's bound fails where α_κ leaves its domain
    let (e31, e32) = envelopes(x, y, kappa, spec, 1.0, table)
        .map_or((f64::NAN, f64::NAN), |e| (e.thm31, e.thm32));
    let rankin = rankin_bound(x, y, kappa, spec).unwrap_or(f64::NAN);
    let dev = star / (f * lambda);
    Ok(Row::Done(format!(
        "{key},{},ok",
        csv_line(&[psi, f, star, lambda, dev, e31, e32, rankin])
    )))
}

pub fn run(cfg: &RunConfig) -> Result<Output, CliError> {
    let spec = match cfg.input_path {
        Some(_) => MultiplicativeSpec::from_json(&read_input(cfg, "--spec")?)?,
        None => MultiplicativeSpec::one(),
    };
    let kappa = kappa_for(cfg, &spec)?;
    let table = RhoTable::with_defaults(kappa)?;
    let grid: Vec<(f64, f64)> = cfg
        .y_list
        .iter()
        .flat_map(|&y| cfg.u_grid.iter().map(move |&u| (y, u)))
        .collect();
    for &(y, u) in &grid {
        if !(y >= 2.0) || !(u >= 0.0) {
            return Err(CliError::Usage(format!(
                "grid point y = {y}, u = {u}: need y >= 2, u >= 0"
            )));
        }
    }
    let rows = grid
        .par_iter()
        .map(|&(y, u)| point(y.powf(u), y, u, kappa, &spec, &table, cfg.budget))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Output {
        csv: format!("{HEADER}\n"),
        ..Output::default()
    };
    for r in rows {
        match r {
            Row::Done(s) => out.csv.push_str(&s),
            Row::Skipped(s) => {
                out.warnings += 1;
                out.csv.push_str(&s);
            }
        }
        out.csv.push('\n');
    }
    out.summary.push(format!(
        "kappa = {}, {} grid points, {} skipped",
        fmt_e12(kappa.get()),
        grid.len(),
        out.warnings
    ));
    Ok(out)
}
