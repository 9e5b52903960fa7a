use super::{Kappa, NumericConfig, RhoTable, EULER_GAMMA};
use crate::error::SpecFnError;
use crate::numeric::integrate_adaptive;

/// Ein(v) = ∫_0^v (1 - e^{-w})/w dw.
pub fn ein(v: f64) -> f64 {
    if v <= 0.0 {
        return 0.0;
    }
    if v <= 2.0 {
        // alternating series sum_{k>=1} (-1)^{k+1} v^k / (k k!)
        let mut sum = 0.0;
        let mut pow_fact = 1.0;
        for k in 1..60 {
            let kf = k as f64;
            pow_fact *= v / kf;
            let term = pow_fact / kf;
            if k % 2 == 1 {
                sum += term;
            } else {
                sum -= term;
            }
            if term < 1e-18 {
                break;
            }
        }
        sum
    } else {
        EULER_GAMMA + v.ln() + e1_continued_fraction(v)
    }
}

// E_1(v) for v > 1 via the modified Lentz continued fraction.
fn e1_continued_fraction(v: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = v + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * (-v).exp()
}

/// μ_κ(u) = ∫_0^∞ exp(-u v + κ Ein(v)) dv, the decreasing solution of the
/// adjoint equation.
///
/// The outer integral is truncated at V once the certified tail bound
/// `g(V) / (u - κ/V)` (the log-derivative of the integrand is at most
/// `-u + κ/V` beyond V) falls below `tail_cutoff_eps` times the result.
pub fn mu_kappa(u: f64, kappa: Kappa, cfg: &NumericConfig) -> Result<f64, SpecFnError> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(SpecFnError::Domain {
            name: "u",
            value: u,
            expected: "> 0",
        });
    }
    let k = kappa.get();
    let integrand = |v: f64| (-u * v + k * ein(v)).exp();
    let rel = cfg.quad_rel_tol.min(1e-12);

    let mut total = 0.0;
    let mut err = 0.0;
    let mut a = 0.0;
    let mut width = (1.0 / u).min(1.0);
    loop {
        let b = a + width;
        let q = integrate_adaptive(integrand, a, b, rel, 0.0);
        total += q.value;
        err += q.abs_error;
        a = b;
        width *= 2.0;
        let decay = u - k / a;
        if decay > 0.0 {
            let bound = integrand(a) / decay;
            if bound <= cfg.tail_cutoff_eps * total {
                break;
            }
        }
        if a > 1e6 {
            return Err(SpecFnError::Quadrature(err));
        }
    }
    if err > 10.0 * rel * total {
        return Err(SpecFnError::Quadrature(err));
    }
    Ok(total)
}

/// Both sides of `u λ_κ(u) μ_κ(u) = κ ∫_{u-1}^u λ_κ(v) μ_κ(v+1) dv`.
#[derive(Clone, Copy, Debug)]
pub struct AdjointIdentity {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Evaluates the λ/μ adjoint identity at u >= 1.
pub fn adjoint_identity(
    u: f64,
    rho: &RhoTable,
    cfg: &NumericConfig,
) -> Result<AdjointIdentity, SpecFnError> {
    if !(u >= 1.0) {
        return Err(SpecFnError::Domain {
            name: "u",
            value: u,
            expected: ">= 1",
        });
    }
    let kappa = rho.kappa();
    let k = kappa.get();
    let lhs = u * rho.lambda(u)? * mu_kappa(u, kappa, cfg)?;

    // split at integers, where λ_κ has reduced smoothness
    let lo = u - 1.0;
    let mut cuts = vec![lo];
    let mut c = lo.floor() + 1.0;
    while c < u {
        if c > lo {
            cuts.push(c);
        }
        c += 1.0;
    }
    cuts.push(u);

    let mut failure: Option<SpecFnError> = None;
    let mut integral = 0.0;
    for w in cuts.windows(2) {
        let q = integrate_adaptive(
            |v| match (rho.lambda(v), mu_kappa(v + 1.0, kappa, cfg)) {
                (Ok(l), Ok(m)) => l * m,
                (Err(e), _) | (_, Err(e)) => {
                    failure.get_or_insert(e);
                    0.0
                }
            },
            w[0],
            w[1],
            1e-12,
            0.0,
        );
        integral += q.value;
    }
    if let Some(e) = failure {
        return Err(e);
    }
    let rhs = k * integral;
    Ok(AdjointIdentity {
        lhs,
        rhs,
        residual: lhs - rhs,
    })
}
