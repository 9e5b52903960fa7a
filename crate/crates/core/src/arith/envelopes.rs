use serde::Serialize;

use super::hypothesis::{z_moments, PrimeDrift};
use super::primes::primes_up_to;
use super::spec::MultiplicativeSpec;
use crate::error::ArithError;
use crate::numeric::CompensatedSum;
use crate::specfn::{h_envelope, xi_kappa, Kappa, NumericConfig, RhoTable};

/// Error-term envelopes at (x, y), all existential constants set to 1.
///
/// `thm31` is the exponent u ξ_κ(u)/log y of the factor e^{B u ξ/log y};
/// `thm32` is E_{x,y}; `thm_a` and `thm_b` are the h_B envelopes
/// `e^{-h_B(u)}/log y` and `u e^{-h_B(u)}/log y` divided by λ_κ(u), so all
/// four are relative errors on the same scale.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Envelopes {
    pub thm31: f64,
    pub thm32: f64,
    pub thm_a: f64,
    pub thm_b: f64,
}

pub fn envelopes(
    x: f64,
    y: f64,
    kappa: Kappa,
    spec: &MultiplicativeSpec,
    b_const: f64,
    table: &RhoTable,
) -> Result<Envelopes, ArithError> {
    if !(y >= 3.0) || !(x >= y) || !x.is_finite() {
        return Err(ArithError::Domain {
            name: "x",
            value: x,
            expected: "x >= y >= 3",
        });
    }
    if !(b_const >= 1.0) {
        return Err(ArithError::Domain {
            name: "b_const",
            value: b_const,
            expected: ">= 1",
        });
    }
    let ly = y.ln();
    let u = x.ln() / ly;
    let xi = xi_kappa(u, kappa, &NumericConfig::default())?;
    let (z1, z2) = z_moments(y, spec)?;
    let lu1 = (u + 1.0).ln();
    let e = z1 / ly + u * lu1 / ly * (1.0 + u * (1.0 + z2 * lu1 / ly).ln());
    let lambda = table.lambda(u)?;
    let ha = (-h_envelope(u, b_const)).exp() / ly;
    Ok(Envelopes {
        thm31: u * xi / ly,
        thm32: e.min(1.0),
        thm_a: ha / lambda,
        thm_b: u * ha / lambda,
    })
}

/// C_κ(f) = ∏_p (1 - 1/p)^κ Σ_ν f(p^ν)/p^ν, truncated at p <= p_cut.
///
/// The returned error bar is `2 osc(r_f)/log p_cut`, where osc is the
/// oscillation of r_f over [√p_cut, p_cut]: by partial summation the
/// neglected tail is about ∫ d r_f(t) / log t.
pub fn c_kappa(
    spec: &MultiplicativeSpec,
    kappa: Kappa,
    p_cut: u64,
) -> Result<(f64, f64), ArithError> {
    let k = kappa.get();
    let primes = primes_up_to(p_cut)?;
    let mut log = CompensatedSum::new();
    for &p in primes.primes() {
        let pf = p as f64;
        let (h, _) = spec.higher_sum(p, 1.0)?;
        let excess = spec.value(p, 1)? / pf + h;
        log.add(excess.ln_1p() + k * (-1.0 / pf).ln_1p());
    }
    let drift = PrimeDrift::new(p_cut, kappa, spec)?;
    let lo = (p_cut as f64).sqrt();
    let (mut rmin, mut rmax) = (f64::INFINITY, f64::NEG_INFINITY);
    for &p in primes.primes().iter().filter(|&&p| p as f64 >= lo) {
        let r = drift.r(p as f64);
        let before = drift.r(p as f64 - 0.5);
        rmin = rmin.min(r).min(before);
        rmax = rmax.max(r).max(before);
    }
    let value = log.value().exp();
    let err = if rmax >= rmin {
        2.0 * (rmax - rmin) / (p_cut as f64).ln() * value
    } else {
        0.0
    };
    Ok((value, err))
}
