use serde::Serialize;

use super::friable::{floor_x, floor_y, WeightedFriableSum, DEFAULT_BUDGET};
use super::primes::primes_up_to;
use super::spec::MultiplicativeSpec;
use crate::error::ArithError;
use crate::numeric::CompensatedSum;
use crate::specfn::{Kappa, RhoTable};

/// Relative accuracy demanded of F(1, y).
pub const F1Y_REL_TOL: f64 = 1e-12;

/// ψ_f(x, y) = Σ_{n <= x, P(n) <= y} f(n)/n.
pub fn psi_f(x: f64, y: f64, spec: &MultiplicativeSpec) -> Result<f64, ArithError> {
    psi_f_with_budget(x, y, spec, DEFAULT_BUDGET)
}

pub fn psi_f_with_budget(
    x: f64,
    y: f64,
    spec: &MultiplicativeSpec,
    budget: usize,
) -> Result<f64, ArithError> {
    weighted(x, y, spec, 1.0, budget)
}

/// Ψ_f(x, y) = Σ_{n <= x, P(n) <= y} f(n).
pub fn big_psi_f(x: f64, y: f64, spec: &MultiplicativeSpec) -> Result<f64, ArithError> {
    big_psi_f_with_budget(x, y, spec, DEFAULT_BUDGET)
}

pub fn big_psi_f_with_budget(
    x: f64,
    y: f64,
    spec: &MultiplicativeSpec,
    budget: usize,
) -> Result<f64, ArithError> {
    weighted(x, y, spec, 0.0, budget)
}

fn weighted(
    x: f64,
    y: f64,
    spec: &MultiplicativeSpec,
    s: f64,
    budget: usize,
) -> Result<f64, ArithError> {
    let xi = floor_x(x)?;
    let yi = floor_y(y)?;
    WeightedFriableSum::new(xi, yi, spec, s)?.evaluate(xi, budget)
}

/// F(1, y) = ∏_{p <= y} Σ_ν f(p^ν)/p^ν.
pub fn f1y(y: f64, spec: &MultiplicativeSpec) -> Result<f64, ArithError> {
    let y = floor_y(y)?;
    let primes = primes_up_to(y)?;
    let mut log = CompensatedSum::new();
    let mut rel_err = 0.0;
    for &p in primes.primes() {
        let (v, err) = spec.local_factor(p, 1.0)?;
        rel_err += err / v;
        if v == 0.0 {
            return Ok(0.0);
        }
        log.add(v.ln());
    }
    if rel_err > F1Y_REL_TOL {
        let worst = primes.primes().first().copied().unwrap_or(2);
        return Err(ArithError::DivergentLocalFactor {
            p: worst,
            ratio: rel_err,
        });
    }
    Ok(log.value().exp())
}

/// ψ*_f(x, y) = F(1, y) - ψ_f(x, y), clamped at 0 against rounding.
pub fn psi_f_star(x: f64, y: f64, spec: &MultiplicativeSpec) -> Result<f64, ArithError> {
    psi_f_star_with_budget(x, y, spec, DEFAULT_BUDGET)
}

pub fn psi_f_star_with_budget(
    x: f64,
    y: f64,
    spec: &MultiplicativeSpec,
    budget: usize,
) -> Result<f64, ArithError> {
    let f = f1y(y, spec)?;
    let psi = psi_f_with_budget(x, y, spec, budget)?;
    star_from(f, psi)
}

pub(crate) fn star_from(f: f64, psi: f64) -> Result<f64, ArithError> {
    let d = f - psi;
    if d >= 0.0 {
        Ok(d)
    } else if d >= -1e-12 * f {
        Ok(0.0)
    } else {
        Err(ArithError::InvalidSpec(format!(
            "psi_f = {psi} exceeds F(1,y) = {f}; local factors are inaccurate"
        )))
    }
}

/// ψ_f, F(1, y) and the deviation of ψ*_f from its predicted size
/// F(1, y) λ_κ(u).
#[derive(Clone, Debug, Serialize)]
pub struct FriableSumReport {
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub psi: f64,
    pub f1y: f64,
    pub psi_star: f64,
    pub lambda_u: f64,
    pub deviation: f64,
    pub envelope_thm31: f64,
    pub envelope_thm32: f64,
}

impl FriableSumReport {
    pub fn compute(
        x: f64,
        y: f64,
        kappa: Kappa,
        spec: &MultiplicativeSpec,
        table: &RhoTable,
        budget: usize,
    ) -> Result<Self, ArithError> {
        if !(y >= 2.0) {
            return Err(ArithError::Domain {
                name: "y",
                value: y,
                expected: ">= 2",
            });
        }
        let u = x.ln() / y.ln();
        let f = f1y(y, spec)?;
        let psi = psi_f_with_budget(x, y, spec, budget)?;
        let psi_star = star_from(f, psi)?;
        let lambda_u = table.lambda(u)?;
        let env = super::envelopes::envelopes(x, y, kappa, spec, 1.0, table)?;
        Ok(FriableSumReport {
            x,
            y,
            u,
            psi,
            f1y: f,
            psi_star,
            lambda_u,
            deviation: psi_star / (f * lambda_u),
            envelope_thm31: env.thm31,
            envelope_thm32: env.thm32,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> MultiplicativeSpec {
        MultiplicativeSpec::one()
    }

    #[test]
    fn psi_examples() {
        assert!((psi_f(3.0, 3.0, &one()).unwrap() - 11.0 / 6.0).abs() < 1e-15);
        assert_eq!(psi_f(1.0, 100.0, &one()).unwrap(), 1.0);
        let sf = MultiplicativeSpec::squarefree_uniform(1.0).unwrap();
        assert!((psi_f(30.0, 3.0, &sf).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn big_psi_examples() {
        assert_eq!(big_psi_f(30.0, 3.0, &one()).unwrap(), 12.0);
        assert_eq!(big_psi_f(1.0, 3.0, &one()).unwrap(), 1.0);
        let tau2 = MultiplicativeSpec::tau_kappa(2.0).unwrap();
        assert_eq!(big_psi_f(4.0, 2.0, &tau2).unwrap(), 6.0);
    }

    #[test]
    fn f1y_examples() {
        assert!((f1y(3.0, &one()).unwrap() - 3.0).abs() < 1e-14);
        let zero = MultiplicativeSpec::squarefree_uniform(0.0).unwrap();
        assert_eq!(f1y(1000.0, &zero).unwrap(), 1.0);
        let sf = MultiplicativeSpec::squarefree_uniform(1.0).unwrap();
        assert!((f1y(3.0, &sf).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn psi_star_examples() {
        assert!((psi_f_star(1.0, 2.0, &one()).unwrap() - 1.0).abs() < 1e-15);
        assert!((psi_f_star(3.0, 3.0, &one()).unwrap() - 7.0 / 6.0).abs() < 1e-14);
        // x >= N_y: every squarefree friable is counted
        let sf = MultiplicativeSpec::squarefree_uniform(1.0).unwrap();
        assert_eq!(psi_f_star(2.0 * 3.0 * 5.0 * 7.0, 7.0, &sf).unwrap(), 0.0);
    }
}
