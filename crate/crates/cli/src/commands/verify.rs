use std::fmt;
use std::str::FromStr;

use friable_core::arith::{
    psi_f_with_budget, verify_eq_7_3, verify_eq_8_2, MultiplicativeSpec, DEFAULT_BUDGET,
};
use friable_core::numeric::fmt_e12;
use friable_core::sieve::SelbergWeights;
use friable_core::specfn::{adjoint_identity, EULER_GAMMA};
use friable_core::{Kappa, NumericConfig, RhoTable};
use rayon::prelude::*;

use super::Output;
use crate::config::RunConfig;
use crate::corpus::{sieve_instance, squarefree_case, SIEVE_CASES, SQUAREFREE_CASES};
use crate::error::CliError;

pub const HEADER: &str = "suite,case,seed,lhs,rhs,residual,tolerance,pass";

/// κ used for the exact identities on the random corpus; they hold for any κ.
const CORPUS_KAPPA: f64 = 1.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Tail identity for ψ*_f on the squarefree corpus.
    Eq73,
    /// Diagonal identity for ψ_f on the corpus and on τ_2, x <= 30.
    Eq82,
    /// λ/μ adjoint identity at u ∈ {1.5, 2, 3, 5}, κ ∈ {1, 2}.
    Eq711,
    /// Quadratic form of the optimal weights against 1/ψ_f(D, z).
    QuadraticForm,
    /// ∫ρ_κ = e^{γκ} for κ ∈ {0.5, 1, 2, 3}.
    Normalization,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Eq73,
        Suite::Eq82,
        Suite::Eq711,
        Suite::QuadraticForm,
        Suite::Normalization,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Eq73 => "eq73",
            Suite::Eq82 => "eq82",
            Suite::Eq711 => "eq711",
            Suite::QuadraticForm => "quadratic_form",
            Suite::Normalization => "normalization",
        }
    }

    /// Relative tolerance before scaling.
    pub fn tolerance(self) -> f64 {
        match self {
            Suite::Eq73 | Suite::Eq82 => 1e-10,
            Suite::Eq711 => 1e-7,
            Suite::QuadraticForm => 1e-9,
            Suite::Normalization => 1e-6,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown suite {s:?}; expected one of eq73, eq82, eq711, quadratic_form, normalization")))
    }
}

/// One residual check.
#[derive(Clone, Debug)]
pub struct CheckRow {
    pub suite: Suite,
    pub case: String,
    pub seed: u64,
    pub lhs: f64,
    pub rhs: f64,
    /// Relative residual.
    pub residual: f64,
    pub tolerance: f64,
}

impl CheckRow {
    pub fn pass(&self) -> bool {
        self.residual <= self.tolerance
    }

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.suite,
            self.case,
            self.seed,
            fmt_e12(self.lhs),
            fmt_e12(self.rhs),
            fmt_e12(self.residual),
            fmt_e12(self.tolerance),
            self.pass()
        )
    }
}

fn rel(lhs: f64, rhs: f64) -> f64 {
    let scale = lhs.abs().max(rhs.abs());
    if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs).abs() / scale
    }
}

/// Runs one suite; rows come back in a fixed order.
pub fn run_suite(suite: Suite, seed: u64, tol_scale: f64) -> Result<Vec<CheckRow>, CliError> {
    let tolerance = suite.tolerance() * tol_scale;
    let row = |case: String, lhs: f64, rhs: f64, residual: f64| CheckRow {
        suite,
        case,
        seed,
        lhs,
        rhs,
        residual,
        tolerance,
    };
    let corpus = || {
        (0..SQUAREFREE_CASES)
            .into_par_iter()
            .map(|i| (i, squarefree_case(seed, i)))
    };
    let k = Kappa::new(CORPUS_KAPPA).expect("positive");
    match suite {
        Suite::Eq73 => corpus()
            .map(|(i, c)| {
                let r = verify_eq_7_3(c.x, c.y, k, &c.spec)?;
                Ok(row(i.to_string(), r.lhs, r.rhs, r.relative_residual()))
            })
            .collect(),
        Suite::Eq82 => {
            let mut rows: Vec<CheckRow> = corpus()
                .map(|(i, c)| {
                    let r = verify_eq_8_2(c.x, k, &c.spec)?;
                    Ok::<_, CliError>(row(i.to_string(), r.lhs, r.rhs, r.relative_residual()))
                })
                .collect::<Result<_, _>>()?;
            let tau2 = MultiplicativeSpec::tau_kappa(2.0)?;
            let k2 = Kappa::new(2.0).expect("positive");
            for x in 1..=30 {
                let r = verify_eq_8_2(x as f64, k2, &tau2)?;
                rows.push(row(
                    format!("tau2_x{x}"),
                    r.lhs,
                    r.rhs,
                    r.relative_residual(),
                ));
            }
            Ok(rows)
        }
        Suite::Eq711 => {
            let cfg = NumericConfig::default();
            let mut rows = Vec::new();
            for kv in [1.0, 2.0] {
                let table = RhoTable::with_defaults(Kappa::new(kv).expect("positive"))?;
                for u in [1.5, 2.0, 3.0, 5.0] {
                    let a = adjoint_identity(u, &table, &cfg)?;
                    rows.push(row(format!("k{kv}_u{u}"), a.lhs, a.rhs, rel(a.lhs, a.rhs)));
                }
            }
            Ok(rows)
        }
        Suite::QuadraticForm => (0..SIEVE_CASES)
            .into_par_iter()
            .map(|i| {
                let inst = sieve_instance(seed, i);
                let w = SelbergWeights::new(inst.density(), inst.d_level(), DEFAULT_BUDGET)?;
                let psi = psi_f_with_budget(
                    inst.d_level(),
                    inst.z(),
                    &inst.density().to_spec()?,
                    DEFAULT_BUDGET,
                )?;
                let q = w.quadratic_form(inst.density());
                Ok(row(i.to_string(), q, 1.0 / psi, (q * psi - 1.0).abs()))
            })
            .collect(),
        Suite::Normalization => [0.5, 1.0, 2.0, 3.0]
            .into_iter()
            .map(|kv| {
                let table = RhoTable::with_defaults(Kappa::new(kv).expect("positive"))?;
                let want = (EULER_GAMMA * kv).exp();
                let got = table.gamma_kappa_norm();
                Ok(row(format!("k{kv}"), got, want, rel(got, want)))
            })
            .collect(),
    }
}

pub fn run(cfg: &RunConfig) -> Result<Output, CliError> {
    let mut out = Output {
        csv: format!("{HEADER}\n"),
        ..Output::default()
    };
    for &suite in &cfg.suites {
        let rows = run_suite(suite, cfg.seed, cfg.tol_scale)?;
        let passed = rows.iter().filter(|r| r.pass()).count();
        for r in &rows {
            out.csv.push_str(&r.csv());
            out.csv.push('\n');
            if !r.pass() {
                out.failures.push(format!(
                    "{suite} case {} (seed {}): residual {} > {}",
                    r.case,
                    r.seed,
                    fmt_e12(r.residual),
                    fmt_e12(r.tolerance)
                ));
            }
        }
        let worst = rows.iter().fold(0.0f64, |m, r| m.max(r.residual));
        out.summary.push(format!(
            "{suite}: {passed}/{} pass, worst residual {}",
            rows.len(),
            fmt_e12(worst)
        ));
    }
    Ok(out)
}
