use std::time::Instant;

use friable_core::arith::{psi_f_with_budget, MultiplicativeSpec};
use friable_core::numeric::fmt_e12;
use friable_core::sieve::{corollary_4_3_driver, count_roots_hensel, BoundOptions, Poly};
use friable_core::{Kappa, RhoTable};

use super::Output;
use crate::config::RunConfig;
use crate::error::CliError;

pub const HEADER: &str = "task,seconds,value";

fn timed(name: &str, f: impl FnOnce() -> Result<f64, CliError>) -> Result<String, CliError> {
    let t = Instant::now();
    let v = f()?;
    Ok(format!(
        "{name},{},{}",
        fmt_e12(t.elapsed().as_secs_f64()),
        fmt_e12(v)
    ))
}

/// Wall-clock timings of representative workloads. Not deterministic.
pub fn run(cfg: &RunConfig) -> Result<Output, CliError> {
    let rows = [
        timed("rho_table_k1", || {
            Ok(RhoTable::with_defaults(Kappa::new(1.0)?)?.gamma_kappa_norm())
        })?,
        timed("rho_table_k2.5", || {
            Ok(RhoTable::with_defaults(Kappa::new(2.5)?)?.gamma_kappa_norm())
        })?,
        timed("psi_one_1e8_1e3", || {
            Ok(psi_f_with_budget(
                1e8,
                1e3,
                &MultiplicativeSpec::one(),
                cfg.budget,
            )?)
        })?,
        timed("psi_tau2_1e6_1e2", || {
            Ok(psi_f_with_budget(
                1e6,
                1e2,
                &MultiplicativeSpec::tau_kappa(2.0)?,
                cfg.budget,
            )?)
        })?,
        timed("sieve_q15_x2m1", || {
            let r = corollary_4_3_driver(
                1,
                5000,
                15,
                &Poly::new(vec![-1, 0, 1]),
                None,
                BoundOptions::default(),
            )?;
            Ok(r.sieve.bound)
        })?,
        timed("hensel_x2_2e40", || {
            Ok(count_roots_hensel(2, 40, &Poly::new(vec![0, 0, 1]))? as f64)
        })?,
    ];
    let mut csv = format!("{HEADER}\n");
    for r in rows {
        csv.push_str(&r);
        csv.push('\n');
    }
    Ok(Output {
        csv,
        ..Output::default()
    })
}
