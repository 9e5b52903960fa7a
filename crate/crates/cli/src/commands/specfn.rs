use friable_core::specfn::{mu_kappa, rho_asymptotic, xi_kappa};
use friable_core::{Kappa, NumericConfig, RhoTable};
use rayon::prelude::*;

use super::{csv_line, Output};
use crate::config::RunConfig;
use crate::error::CliError;

pub const HEADER: &str = "kappa,u,rho,lambda,j,mu,xi,rho_asym,ratio";

/// One block of rows per κ over the u grid. μ and ξ are undefined at u = 0
/// and the saddle-point approximation is only tabulated for u >= 2; those
/// cells are `nan`.
pub fn run(cfg: &RunConfig) -> Result<Output, CliError> {
    let num = NumericConfig::default();
    let mut csv = format!("{HEADER}\n");
    for &k in cfg.kappas.as_deref().unwrap_or(&[1.0]) {
        let kappa = Kappa::new(k).map_err(|e| CliError::Usage(e.to_string()))?;
        let table = RhoTable::with_defaults(kappa)?;
        let rows = cfg
            .u_grid
            .par_iter()
            .map(|&u| {
                let rho = table.rho(u)?;
                let (mu, xi) = if u > 0.0 {
                    (mu_kappa(u, kappa, &num)?, xi_kappa(u, kappa, &num)?)
                } else {
                    (f64::NAN, f64::NAN)
                };
                let asym = if u >= 2.0 {
                    rho_asymptotic(u, kappa, &num)?
                } else {
                    f64::NAN
                };
                Ok(csv_line(&[
                    k,
                    u,
                    rho,
                    table.lambda(u)?,
                    table.j(u)?,
                    mu,
                    xi,
                    asym,
                    rho / asym,
                ]))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        for r in rows {
            csv.push_str(&r);
            csv.push('\n');
        }
    }
    Ok(Output {
        csv,
        ..Output::default()
    })
}
