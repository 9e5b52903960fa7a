use super::primes::primes_up_to;
use super::spec::{MultiplicativeSpec, SpecKind};
use crate::error::ArithError;
use crate::numeric::CompensatedSum;
use crate::specfn::{xi_kappa, Kappa, NumericConfig};

/// α_κ = 1 - ξ_κ(u)/log y with u = log x / log y.
pub fn alpha_kappa(x: f64, y: f64, kappa: Kappa, cfg: &NumericConfig) -> Result<f64, ArithError> {
    if !(y >= 2.0) || !(x >= y) {
        return Err(ArithError::Domain {
            name: "x",
            value: x,
            expected: "x >= y >= 2",
        });
    }
    let ly = y.ln();
    Ok(1.0 - xi_kappa(x.ln() / ly, kappa, cfg)? / ly)
}

/// Rankin's upper bound `x^{σ-1} exp(K_σ + Σ_{p<=y} f(p)/p^σ)` for ψ*_f(x, y),
/// taken at σ = α_κ.
///
/// The ν >= 2 part K_σ needs σ >= 1 - η unless f is squarefree-supported or
/// a divisor function, whose local factors are summed in closed form.
pub fn rankin_bound(
    x: f64,
    y: f64,
    kappa: Kappa,
    spec: &MultiplicativeSpec,
) -> Result<f64, ArithError> {
    if !(x >= 1.0) || !(y >= 2.0) {
        return Err(ArithError::Domain {
            name: "x",
            value: x,
            expected: "x >= 1, y >= 2",
        });
    }
    let sigma = alpha_kappa(x.max(y), y, kappa, &NumericConfig::default())?;
    rankin_bound_at(x, y, sigma, spec)
}

/// Rankin's bound at an explicit σ ∈ (0, 1].
pub fn rankin_bound_at(
    x: f64,
    y: f64,
    sigma: f64,
    spec: &MultiplicativeSpec,
) -> Result<f64, ArithError> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(ArithError::RankinDomain { sigma, floor: 0.0 });
    }
    let closed_form =
        spec.is_squarefree_supported() || matches!(spec.kind(), SpecKind::TauKappa { .. });
    let floor = 1.0 - spec.eta();
    if !closed_form && sigma < floor {
        return Err(ArithError::RankinDomain { sigma, floor });
    }
    let primes = primes_up_to(y.floor() as u64)?;
    let mut exponent = CompensatedSum::new();
    for &p in primes.primes() {
        let (k, err) = spec.higher_sum(p, sigma)?;
        exponent.add(k + err);
        exponent.add(spec.value(p, 1)? * (p as f64).powf(-sigma));
    }
    exponent.add((sigma - 1.0) * x.ln());
    Ok(exponent.value().exp())
}
