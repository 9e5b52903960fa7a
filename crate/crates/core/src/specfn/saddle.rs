use super::{Kappa, NumericConfig, EULER_GAMMA};
use crate::error::SpecFnError;
use crate::numeric::integrate_adaptive;

/// Below this argument I'' is summed from its Taylor series instead of the
/// closed form, which cancels catastrophically near 0.
const I2_SERIES_CUTOFF: f64 = 0.5;

/// ξ(t): the nonzero real root of `e^ξ = 1 + t ξ`, with ξ(0) = ξ(1) = 0.
///
/// For t > 1 the root is positive, for 0 < t < 1 it is negative.
pub fn xi_root(t: f64, cfg: &NumericConfig) -> Result<f64, SpecFnError> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(SpecFnError::Domain {
            name: "t",
            value: t,
            expected: ">= 0",
        });
    }
    if t == 0.0 || t == 1.0 {
        return Ok(0.0);
    }
    // x - log(1 + t x) is convex with the same nonzero root and, unlike
    // e^x - 1 - t x, stays well scaled for large t
    let f = |x: f64| x - (t * x).ln_1p();
    let df = |x: f64| 1.0 - t / (1.0 + t * x);
    let (mut lo, mut hi) = if t > 1.0 {
        let mut lo = (1.0 + t).ln();
        while f(lo) >= 0.0 {
            lo *= 0.5;
            if lo < 1e-300 {
                return Err(SpecFnError::NoConvergence { t, iterations: 0 });
            }
        }
        let hi = 2.0 * ((1.0 + t).ln() + (2.0 + t).ln() + 2.0);
        (lo, hi)
    } else {
        // f -> +inf as x -> -1/t and f < 0 just left of 0
        let mut hi = -1e-3 * (1.0 - t);
        while f(hi) >= 0.0 {
            hi *= 0.5;
            if hi > -1e-300 {
                return Err(SpecFnError::NoConvergence { t, iterations: 0 });
            }
        }
        (-(1.0 - 1e-15) / t, hi)
    };
    // sign convention: f(neg_end) < 0 < f(pos_end)
    let increasing = f(lo) < 0.0;
    let mut x = 0.5 * (lo + hi);
    for it in 0..cfg.newton_max_iter {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if (fx < 0.0) == increasing {
            lo = x;
        } else {
            hi = x;
        }
        let d = df(x);
        let mut next = x - fx / d;
        if !(next > lo.min(hi) && next < lo.max(hi)) || d == 0.0 {
            next = 0.5 * (lo + hi);
        }
        let step = (next - x).abs();
        x = next;
        if step <= cfg.newton_tol * x.abs().max(1.0) {
            return Ok(x);
        }
        if it + 1 == cfg.newton_max_iter {
            break;
        }
    }
    Err(SpecFnError::NoConvergence {
        t,
        iterations: cfg.newton_max_iter,
    })
}

/// ξ_κ(u) = max{1, ξ(u/κ)}.
pub fn xi_kappa(u: f64, kappa: Kappa, cfg: &NumericConfig) -> Result<f64, SpecFnError> {
    if !(u > 0.0) {
        return Err(SpecFnError::Domain {
            name: "u",
            value: u,
            expected: "> 0",
        });
    }
    let t = u / kappa.get();
    // ξ(t) <= 1 exactly when t <= e - 1
    if t <= std::f64::consts::E - 1.0 {
        return Ok(1.0);
    }
    Ok(xi_root(t, cfg)?.max(1.0))
}

/// I(s) = ∫_0^s (e^v - 1)/v dv and its first two derivatives.
pub fn big_i(s: f64, order: u8, cfg: &NumericConfig) -> Result<f64, SpecFnError> {
    if !(s >= 0.0) {
        return Err(SpecFnError::Domain {
            name: "s",
            value: s,
            expected: ">= 0",
        });
    }
    match order {
        0 => {
            if s == 0.0 {
                return Ok(0.0);
            }
            let q = integrate_adaptive(expm1_over_x, 0.0, s, cfg.quad_rel_tol.min(1e-13), 0.0);
            if !q.converged {
                return Err(SpecFnError::Quadrature(q.abs_error));
            }
            Ok(q.value)
        }
        1 => Ok(expm1_over_x(s)),
        2 => Ok(i_second(s)),
        _ => Err(SpecFnError::Domain {
            name: "order",
            value: order as f64,
            expected: "0, 1 or 2",
        }),
    }
}

fn expm1_over_x(v: f64) -> f64 {
    if v == 0.0 {
        1.0
    } else {
        v.exp_m1() / v
    }
}

// d/ds (e^s - 1)/s = sum_{k>=1} k s^{k-1} / (k+1)!
fn i_second(s: f64) -> f64 {
    if s < I2_SERIES_CUTOFF {
        let mut term: f64 = 0.5; // k = 1: 1/2!
        let mut sum: f64 = 0.0;
        let mut k = 1.0;
        while term.abs() > 1e-18 * sum.abs().max(1e-300) || k < 2.0 {
            sum += term;
            // term_k = k s^{k-1}/(k+1)!  ->  term_{k+1} = term_k * s (k+1) / (k (k+2))
            term *= s * (k + 1.0) / (k * (k + 2.0));
            k += 1.0;
            if k > 60.0 {
                break;
            }
        }
        sum
    } else {
        (s.exp_m1() * (s - 1.0) + s) / (s * s)
    }
}

/// Saddle-point data at u: ξ_κ(u), σ_0(u) = κ I(ξ), σ_2(u) = κ I''(ξ).
#[derive(Clone, Copy, Debug)]
pub struct SaddleParams {
    pub u: f64,
    pub xi: f64,
    pub sigma0: f64,
    pub sigma2: f64,
}

impl SaddleParams {
    pub fn new(u: f64, kappa: Kappa, cfg: &NumericConfig) -> Result<Self, SpecFnError> {
        let xi = xi_kappa(u, kappa, cfg)?;
        let k = kappa.get();
        Ok(SaddleParams {
            u,
            xi,
            sigma0: k * big_i(xi, 0, cfg)?,
            sigma2: k * big_i(xi, 2, cfg)?,
        })
    }
}

/// Main factor of the saddle-point asymptotic for ρ_κ(u),
/// `e^{γκ - u ξ + σ_0} / sqrt(2π σ_2)`, without the `1 + O(1/u)` correction.
pub fn rho_asymptotic(u: f64, kappa: Kappa, cfg: &NumericConfig) -> Result<f64, SpecFnError> {
    if !(u >= 2.0) {
        return Err(SpecFnError::Domain {
            name: "u",
            value: u,
            expected: ">= 2",
        });
    }
    let sp = SaddleParams::new(u, kappa, cfg)?;
    let log = EULER_GAMMA * kappa.get() - u * sp.xi + sp.sigma0
        - 0.5 * (2.0 * std::f64::consts::PI * sp.sigma2).ln();
    Ok(log.exp())
}

/// h_B(u) = u log(u/B) - u + B for u > B, and 0 otherwise.
pub fn h_envelope(u: f64, b_const: f64) -> f64 {
    if u > b_const {
        u * (u / b_const).ln() - u + b_const
    } else {
        0.0
    }
}
