use std::collections::BTreeMap;

use crate::arith::{factorize, is_prime, MultiplicativeSpec};
use crate::error::SieveError;

/// The density w on prime powers, with ϑ(p^ν) = 1 - Σ_{μ<=ν} w(p^μ)/p^μ.
///
/// Construction enforces Σ_ν w(p^ν)/p^ν < 1 for every p, so ϑ stays
/// positive. Prime powers absent from the map have w = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityFunction {
    w: BTreeMap<(u64, u32), f64>,
}

impl DensityFunction {
    pub fn new(w: BTreeMap<(u64, u32), f64>) -> Result<Self, SieveError> {
        for (&(p, nu), &v) in &w {
            if !is_prime(p) || nu == 0 {
                return Err(SieveError::Invalid(format!(
                    "{p}^{nu} is not a prime power"
                )));
            }
            if !(v >= 0.0 && v.is_finite()) {
                return Err(SieveError::Invalid(format!(
                    "w({p}^{nu}) = {v} must be nonnegative"
                )));
            }
        }
        let d = DensityFunction { w };
        for p in d.primes() {
            d.theta(p, d.max_nu(p))?;
        }
        Ok(d)
    }

    pub fn zero() -> Self {
        DensityFunction { w: BTreeMap::new() }
    }

    pub fn entries(&self) -> &BTreeMap<(u64, u32), f64> {
        &self.w
    }

    pub fn w(&self, p: u64, nu: u32) -> f64 {
        if nu == 0 {
            1.0
        } else {
            self.w.get(&(p, nu)).copied().unwrap_or(0.0)
        }
    }

    /// w(n) = ∏ w(p^ν) over p^ν ∥ n.
    pub fn w_of(&self, n: u64) -> f64 {
        factorize(n)
            .into_iter()
            .map(|(p, nu)| self.w(p, nu))
            .product()
    }

    /// Primes with some w(p^ν) > 0.
    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self
            .w
            .iter()
            .filter(|(_, &v)| v > 0.0)
            .map(|(&(p, _), _)| p)
            .collect();
        ps.dedup();
        ps
    }

    /// Largest ν with w(p^ν) > 0, or 0.
    pub fn max_nu(&self, p: u64) -> u32 {
        self.w
            .range((p, 1)..=(p, u32::MAX))
            .filter(|(_, &v)| v > 0.0)
            .map(|(&(_, nu), _)| nu)
            .max()
            .unwrap_or(0)
    }

    /// w(p^ν)/p^ν = ϑ(p^{ν-1}) - ϑ(p^ν), without cancellation.
    fn step(&self, p: u64, nu: u32) -> f64 {
        self.w(p, nu) / (p as f64).powi(nu as i32)
    }

    pub fn theta(&self, p: u64, nu: u32) -> Result<f64, SieveError> {
        let value = 1.0 - (1..=nu).map(|mu| self.step(p, mu)).sum::<f64>();
        if value > 0.0 {
            Ok(value)
        } else {
            Err(SieveError::ThetaNotPositive { p, nu, value })
        }
    }

    /// g(p^ν) = {ϑ(p^{ν-1}) - ϑ(p^ν)} ϑ(p^ν)/ϑ(p^{ν-1}), ν >= 1.
    pub fn g_local(&self, p: u64, nu: u32) -> Result<f64, SieveError> {
        if nu == 0 {
            return Ok(1.0);
        }
        Ok(self.step(p, nu) * self.theta(p, nu)? / self.theta(p, nu - 1)?)
    }

    /// t*(p^μ, p^ν).
    pub fn t_star_local(&self, p: u64, mu: u32, nu: u32) -> Result<f64, SieveError> {
        if nu > mu {
            return Ok(0.0);
        }
        if nu == mu {
            return Ok(1.0);
        }
        let r = self.step(p, mu) / self.theta(p, mu - 1)?;
        Ok(if nu == 0 { -r } else { r })
    }

    pub fn g(&self, m: u64) -> Result<f64, SieveError> {
        factorize(m)
            .into_iter()
            .try_fold(1.0, |acc, (p, nu)| Ok(acc * self.g_local(p, nu)?))
    }

    /// t*(m, d), multiplicative in both arguments.
    pub fn t_star(&self, m: u64, d: u64) -> Result<f64, SieveError> {
        let fm = factorize(m);
        let fd = factorize(d);
        if fd.iter().any(|(p, _)| !fm.iter().any(|(q, _)| q == p)) {
            return Ok(0.0);
        }
        let mut acc = 1.0;
        for &(p, mu) in &fm {
            let nu = fd.iter().find(|(q, _)| *q == p).map_or(0, |&(_, nu)| nu);
            acc *= self.t_star_local(p, mu, nu)?;
        }
        Ok(acc)
    }

    /// f(p^ν) = p^ν/ϑ(p^ν) - p^ν/ϑ(p^{ν-1}).
    pub fn f_local(&self, p: u64, nu: u32) -> Result<f64, SieveError> {
        let pn = (p as f64).powi(nu as i32);
        Ok(pn * self.step(p, nu) / (self.theta(p, nu)? * self.theta(p, nu - 1)?))
    }

    /// The multiplicative f whose ψ_f(D, z) is the Selberg denominator.
    pub fn to_spec(&self) -> Result<MultiplicativeSpec, SieveError> {
        let mut entries = BTreeMap::new();
        for p in self.primes() {
            for nu in 1..=self.max_nu(p) {
                entries.insert((p, nu), self.f_local(p, nu)?);
            }
        }
        Ok(MultiplicativeSpec::table(entries, 0.0)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dens(items: &[((u64, u32), f64)]) -> Result<DensityFunction, SieveError> {
        DensityFunction::new(items.iter().copied().collect())
    }

    #[test]
    fn theta_examples() {
        let d = dens(&[((2, 1), 1.0)]).unwrap();
        assert_eq!(d.theta(2, 0).unwrap(), 1.0);
        assert_eq!(d.theta(2, 1).unwrap(), 0.5);
        assert!(matches!(
            dens(&[((2, 1), 2.0)]),
            Err(SieveError::ThetaNotPositive { .. })
        ));
    }

    #[test]
    fn g_and_t_star() {
        let d = dens(&[((2, 1), 1.0)]).unwrap();
        assert_eq!(d.g_local(2, 1).unwrap(), 0.25);
        assert_eq!(d.t_star_local(2, 3, 3).unwrap(), 1.0);
        assert_eq!(d.t_star_local(2, 1, 2).unwrap(), 0.0);
        let zero = DensityFunction::zero();
        assert_eq!(zero.g_local(3, 2).unwrap(), 0.0);
        assert_eq!(zero.t_star_local(3, 2, 0).unwrap(), 0.0);
    }

    #[test]
    fn f_of_single_class() {
        let d = dens(&[((2, 1), 1.0)]).unwrap();
        assert_eq!(d.f_local(2, 1).unwrap(), 2.0);
        let s = d.to_spec().unwrap();
        assert_eq!(crate::arith::psi_f(10.0, 3.0, &s).unwrap(), 2.0);
    }

    #[test]
    fn theta_monotone_f_nonnegative() {
        let d = dens(&[((3, 1), 1.0), ((3, 2), 2.0), ((3, 4), 10.0)]).unwrap();
        let mut prev = 1.0;
        for nu in 1..=5 {
            let t = d.theta(3, nu).unwrap();
            assert!(t <= prev);
            prev = t;
            assert!(d.f_local(3, nu).unwrap() >= 0.0);
        }
    }
}
