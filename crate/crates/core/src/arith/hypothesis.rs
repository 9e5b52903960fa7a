use serde::Serialize;

use super::primes::primes_up_to;
use super::spec::MultiplicativeSpec;
use crate::error::ArithError;
use crate::numeric::CompensatedSum;
use crate::specfn::Kappa;

/// Cumulative prime sums Σ_{p <= z} f(p) log p / p for z up to a limit, so
/// that r_f can be evaluated repeatedly in O(log π(z)).
#[derive(Clone, Debug)]
pub struct PrimeDrift {
    kappa: f64,
    primes: Vec<u64>,
    /// cumulative[k] = Σ over the first k primes
    cumulative: Vec<f64>,
}

impl PrimeDrift {
    pub fn new(limit: u64, kappa: Kappa, spec: &MultiplicativeSpec) -> Result<Self, ArithError> {
        let primes = primes_up_to(limit)?.primes().to_vec();
        let mut cumulative = Vec::with_capacity(primes.len() + 1);
        let mut acc = CompensatedSum::new();
        cumulative.push(0.0);
        for &p in &primes {
            let pf = p as f64;
            acc.add(spec.value(p, 1)? * pf.ln() / pf);
            cumulative.push(acc.value());
        }
        Ok(PrimeDrift {
            kappa: kappa.get(),
            primes,
            cumulative,
        })
    }

    pub fn limit_prime(&self) -> u64 {
        self.primes.last().copied().unwrap_or(1)
    }

    /// r_f(z) for 0 <= z <= limit; zero on [0, 1].
    pub fn r(&self, z: f64) -> f64 {
        if z <= 1.0 {
            return 0.0;
        }
        let k = self.primes.partition_point(|&p| p as f64 <= z);
        self.cumulative[k] - self.kappa * z.ln()
    }

    /// r_f just before the jump at the k-th prime, and just after it.
    fn around(&self, k: usize) -> (f64, f64) {
        let lp = (self.primes[k] as f64).ln();
        (
            self.cumulative[k] - self.kappa * lp,
            self.cumulative[k + 1] - self.kappa * lp,
        )
    }
}

/// r_f(z) = Σ_{p <= z} f(p) log p / p - κ log z, and 0 for z <= 1.
pub fn r_f(z: f64, kappa: Kappa, spec: &MultiplicativeSpec) -> Result<f64, ArithError> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(ArithError::Domain {
            name: "z",
            value: z,
            expected: ">= 0",
        });
    }
    if z <= 1.0 {
        return Ok(0.0);
    }
    Ok(PrimeDrift::new(z.floor() as u64, kappa, spec)?.r(z))
}

/// (Z_1, Z_2) with Z_j = 1 + Σ_{p <= y} f(p)² (log p)^j / p².
pub fn z_moments(y: f64, spec: &MultiplicativeSpec) -> Result<(f64, f64), ArithError> {
    if !(y >= 2.0) || !y.is_finite() {
        return Err(ArithError::Domain {
            name: "y",
            value: y,
            expected: ">= 2",
        });
    }
    let primes = primes_up_to(y.floor() as u64)?;
    let mut z1 = CompensatedSum::new();
    let mut z2 = CompensatedSum::new();
    z1.add(1.0);
    z2.add(1.0);
    for &p in primes.primes() {
        let pf = p as f64;
        let v = spec.value(p, 1)?;
        let base = v * v / (pf * pf);
        let l = pf.ln();
        z1.add(base * l);
        z2.add(base * l * l);
    }
    Ok((z1.value(), z2.value()))
}

/// Measured hypothesis constants of a spec over primes up to z_max.
#[derive(Clone, Debug, Serialize)]
pub struct HypothesisReport {
    pub z_max: f64,
    /// 2 sup |r_f(z)|: the smallest A with |r_f| <= A/2
    pub a_bilateral: f64,
    /// sup_{z >= w >= 1} r_f(z) - r_f(w)
    pub a_unilateral: f64,
    /// Σ_p Σ_{ν>=2} f(p^ν) / p^{(1-η)ν}, including the tail bound below
    pub c_sum: f64,
    /// bound used for the primes beyond z_max
    pub c_sum_tail: f64,
    pub z1: f64,
    pub z2: f64,
    /// least-squares slope of r_f(p) against log p over √z_max <= p <= z_max
    pub drift_slope: f64,
    /// set when r_f drifts like a multiple of log z (a wrong κ)
    pub drift_flag: bool,
}

/// Evaluates r_f at both ends of every jump (and at z = 1, z_max); since r_f
/// is monotone between jumps these points give the exact extrema.
pub fn hypothesis_report(
    spec: &MultiplicativeSpec,
    kappa: Kappa,
    z_max: f64,
) -> Result<HypothesisReport, ArithError> {
    if !(z_max >= 2.0) || !z_max.is_finite() {
        return Err(ArithError::Domain {
            name: "z_max",
            value: z_max,
            expected: ">= 2",
        });
    }
    let drift = PrimeDrift::new(z_max.floor() as u64, kappa, spec)?;
    let mut sup_abs: f64 = 0.0;
    let mut running_min: f64 = 0.0; // r_f(1) = 0
    let mut a_uni: f64 = 0.0;
    let mut fit = Vec::new();
    let sqrt_z = z_max.sqrt();
    for k in 0..drift.primes.len() {
        let (before, after) = drift.around(k);
        running_min = running_min.min(before);
        sup_abs = sup_abs.max(before.abs()).max(after.abs());
        a_uni = a_uni.max(after - running_min);
        running_min = running_min.min(after);
        let p = drift.primes[k] as f64;
        if p >= sqrt_z {
            fit.push((p.ln(), after));
        }
    }
    let end = drift.r(z_max);
    sup_abs = sup_abs.max(end.abs());
    a_uni = a_uni.max(end - running_min);

    let drift_slope = slope(&fit);
    let sigma = 1.0 - spec.eta();
    let mut c = CompensatedSum::new();
    for &p in &drift.primes {
        c.add(spec.higher_sum(p, sigma)?.0);
    }
    let c_sum_tail = spec.higher_tail_bound(z_max, sigma)?;
    c.add(c_sum_tail);
    if !c.value().is_finite() {
        return Err(ArithError::DivergentLocalFactor {
            p: drift.limit_prime(),
            ratio: c.value(),
        });
    }
    let (z1, z2) = z_moments(z_max, spec)?;
    Ok(HypothesisReport {
        z_max,
        a_bilateral: 2.0 * sup_abs,
        a_unilateral: a_uni,
        c_sum: c.value(),
        c_sum_tail,
        z1,
        z2,
        drift_slope,
        drift_flag: drift_slope.abs() > 0.25 * kappa.get(),
    })
}

fn slope(points: &[(f64, f64)]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k1() -> Kappa {
        Kappa::new(1.0).unwrap()
    }

    #[test]
    fn r_f_examples() {
        let one = MultiplicativeSpec::one();
        assert_eq!(r_f(1.0, k1(), &one).unwrap(), 0.0);
        assert_eq!(r_f(0.3, k1(), &one).unwrap(), 0.0);
        let want = -(2f64.ln()) / 2.0;
        assert!((r_f(2.0, k1(), &one).unwrap() - want).abs() < 1e-15);
        assert!(r_f(1e5, k1(), &one).unwrap().abs() <= 2.0);
    }

    #[test]
    fn z_moment_examples() {
        let one = MultiplicativeSpec::one();
        let (z1, z2) = z_moments(2.0, &one).unwrap();
        let l = 2f64.ln();
        assert!((z1 - (1.0 + l / 4.0)).abs() < 1e-15);
        assert!((z2 - (1.0 + l * l / 4.0)).abs() < 1e-15);
        let zero = MultiplicativeSpec::squarefree_uniform(0.0).unwrap();
        assert_eq!(z_moments(1000.0, &zero).unwrap(), (1.0, 1.0));
        let (z1, _) = z_moments(1e4, &one).unwrap();
        assert!(z1 <= 1.0 + 4.0 * 4.0);
    }

    #[test]
    fn mertens_report() {
        let r = hypothesis_report(&MultiplicativeSpec::one(), k1(), 1e4).unwrap();
        assert!(r.a_bilateral <= 3.0, "{}", r.a_bilateral);
        assert!(r.a_unilateral <= 2.0 * r.a_bilateral + 1e-12);
        assert!(!r.drift_flag);
        assert!(r.c_sum > 0.0 && r.c_sum.is_finite());
    }

    #[test]
    fn squarefree_has_no_c_sum() {
        let sf = MultiplicativeSpec::squarefree_uniform(1.0).unwrap();
        let r = hypothesis_report(&sf, k1(), 1000.0).unwrap();
        assert_eq!(r.c_sum, 0.0);
    }

    #[test]
    fn wrong_kappa_is_flagged() {
        // f(p) = 2 but κ = 1: r_f grows like log z
        let sf = MultiplicativeSpec::squarefree_uniform(2.0).unwrap();
        let small = hypothesis_report(&sf, k1(), 1e3).unwrap();
        let big = hypothesis_report(&sf, k1(), 1e5).unwrap();
        assert!(big.drift_flag);
        assert!(big.a_unilateral > small.a_unilateral + 0.8 * (100f64).ln());
    }
}
