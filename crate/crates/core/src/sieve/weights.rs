use std::collections::BTreeMap;

use serde::Serialize;

use super::density::DensityFunction;
use crate::arith::factorize;
use crate::error::SieveError;
use crate::numeric::CompensatedSum;

pub type Factors = Vec<(u64, u32)>;

/// Integers n <= limit built from the allowed exponents of each prime, in
/// ascending order, with their factorizations. Exponent 0 is always allowed.
pub(crate) fn support_lattice(
    options: &[(u64, Vec<u32>)],
    limit: f64,
    budget: usize,
) -> Result<Vec<(u64, Factors)>, SieveError> {
    let mut out = vec![(1u64, Vec::new())];
    for (p, exps) in options {
        let len = out.len();
        for i in 0..len {
            for &nu in exps {
                let Some(pk) = p.checked_pow(nu) else {
                    continue;
                };
                let Some(n) = out[i].0.checked_mul(pk) else {
                    continue;
                };
                if n as f64 > limit {
                    continue;
                }
                let mut f = out[i].1.clone();
                f.push((*p, nu));
                out.push((n, f));
                if out.len() > budget {
                    return Err(SieveError::BudgetExceeded {
                        len: out.len(),
                        budget,
                    });
                }
            }
        }
    }
    out.sort_by_key(|e| e.0);
    Ok(out)
}

/// ε(d, d') = 1 iff every prime appears in d and d' with equal exponents or
/// in at most one of them.
pub fn epsilon(d: u64, d_prime: u64) -> u8 {
    eps_factors(&factorize(d), &factorize(d_prime)) as u8
}

fn eps_factors(a: &[(u64, u32)], b: &[(u64, u32)]) -> bool {
    a.iter()
        .all(|&(p, mu)| b.iter().all(|&(q, nu)| q != p || nu == mu))
}

/// One nonzero weight λ*_d.
#[derive(Clone, Debug, Serialize)]
pub struct Weight {
    pub d: u64,
    pub factors: Factors,
    pub lambda: f64,
}

/// The optimal weights λ*_d for d <= D.
///
/// The sums over m run over m <= D whose every component p^μ has
/// w(p^μ) > 0; other m have t*(m, 1) = 0 and contribute nothing. The d with
/// λ*_d != 0 are exactly the divisors of such m.
#[derive(Clone, Debug)]
pub struct SelbergWeights {
    d_level: f64,
    denominator: f64,
    weights: Vec<Weight>,
}

impl SelbergWeights {
    pub fn new(density: &DensityFunction, d_level: f64, budget: usize) -> Result<Self, SieveError> {
        if !(d_level > 1.0) || !d_level.is_finite() {
            return Err(SieveError::Invalid(format!(
                "level D = {d_level} must exceed 1"
            )));
        }
        let options: Vec<(u64, Vec<u32>)> = density
            .primes()
            .into_iter()
            .map(|p| {
                (
                    p,
                    (1..=density.max_nu(p))
                        .filter(|&nu| density.w(p, nu) > 0.0)
                        .collect(),
                )
            })
            .collect();
        let lattice = support_lattice(&options, d_level, budget)?;

        let mut den = CompensatedSum::new();
        let mut num: BTreeMap<u64, (Factors, CompensatedSum)> = BTreeMap::new();
        let mut work = 0usize;
        for (m, fm) in &lattice {
            // t*(m,1)/g(m) and the per-prime t*(p^μ, p^ν)
            let mut c = 1.0;
            let mut local = Vec::with_capacity(fm.len());
            for &(p, mu) in fm {
                c *= density.t_star_local(p, mu, 0)? / density.g_local(p, mu)?;
                local.push(
                    (0..=mu)
                        .map(|nu| density.t_star_local(p, mu, nu))
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
            let t1: f64 = local.iter().map(|l| l[0]).product();
            den.add(t1 * c);
            // divisors d of m, mixed-radix over the exponents
            let mut idx = vec![0u32; fm.len()];
            loop {
                work += 1;
                if work > budget {
                    return Err(SieveError::BudgetExceeded { len: work, budget });
                }
                let mut d = 1u64;
                let mut t = 1.0;
                let mut fd = Vec::new();
                for (k, &(p, _)) in fm.iter().enumerate() {
                    t *= local[k][idx[k] as usize];
                    if idx[k] > 0 {
                        d *= p.pow(idx[k]);
                        fd.push((p, idx[k]));
                    }
                }
                num.entry(d)
                    .or_insert_with(|| (fd, CompensatedSum::new()))
                    .1
                    .add(t * c);
                let mut k = 0;
                while k < fm.len() {
                    idx[k] += 1;
                    if idx[k] <= fm[k].1 {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == fm.len() {
                    break;
                }
            }
            debug_assert!(*m as f64 <= d_level);
        }
        let denominator = den.value();
        if !(denominator > 0.0) {
            return Err(SieveError::EmptyDenominator);
        }
        let weights = num
            .into_iter()
            .map(|(d, (factors, s))| Weight {
                d,
                factors,
                lambda: s.value() / denominator,
            })
            .collect();
        Ok(SelbergWeights {
            d_level,
            denominator,
            weights,
        })
    }

    pub fn d_level(&self) -> f64 {
        self.d_level
    }

    /// Σ_{m <= D} t*(m, 1)²/g(m), which equals ψ_f(D, z).
    pub fn denominator(&self) -> f64 {
        self.denominator
    }

    /// Nonzero weights in increasing d.
    pub fn support(&self) -> &[Weight] {
        &self.weights
    }

    pub fn lambda(&self, d: u64) -> f64 {
        match self.weights.binary_search_by_key(&d, |w| w.d) {
            Ok(i) => self.weights[i].lambda,
            Err(_) => 0.0,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.weights.iter().fold(0.0, |m, w| m.max(w.lambda.abs()))
    }

    /// Σ_{d, d'} λ_d λ_{d'} ε(d, d') w([d, d'])/[d, d'].
    pub fn quadratic_form(&self, density: &DensityFunction) -> f64 {
        let mut acc = CompensatedSum::new();
        for a in &self.weights {
            for b in &self.weights {
                if !eps_factors(&a.factors, &b.factors) {
                    continue;
                }
                let mut v = a.lambda * b.lambda;
                for &(p, mu) in &a.factors {
                    v *= density.w(p, mu) / (p as f64).powi(mu as i32);
                }
                for &(p, nu) in &b.factors {
                    if !a.factors.iter().any(|&(q, _)| q == p) {
                        v *= density.w(p, nu) / (p as f64).powi(nu as i32);
                    }
                }
                acc.add(v);
            }
        }
        acc.value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon(1, 360), 1);
        assert_eq!(epsilon(2, 4), 0);
        assert_eq!(epsilon(12, 36), 0);
        assert_eq!(epsilon(12, 4 * 5), 1);
    }

    #[test]
    fn trivial_density() {
        let w = SelbergWeights::new(&DensityFunction::zero(), 10.0, 1000).unwrap();
        assert_eq!(w.support().len(), 1);
        assert_eq!(w.lambda(1), 1.0);
        assert_eq!(w.lambda(2), 0.0);
        assert_eq!(w.quadratic_form(&DensityFunction::zero()), 1.0);
    }

    #[test]
    fn classic_selberg() {
        // one class per prime: the usual Selberg sieve
        let dens =
            DensityFunction::new([2u64, 3, 5, 7].iter().map(|&p| ((p, 1), 1.0)).collect()).unwrap();
        let w = SelbergWeights::new(&dens, 30.0, 10_000).unwrap();
        assert_eq!(w.lambda(1), 1.0);
        assert!(w.max_abs() <= 1.0 + 1e-12);
        assert_eq!(w.lambda(31), 0.0);
        let q = w.quadratic_form(&dens);
        assert!((q * w.denominator() - 1.0).abs() < 1e-12);
        let psi = crate::arith::psi_f(30.0, 7.0, &dens.to_spec().unwrap()).unwrap();
        assert!((psi / w.denominator() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lattice_respects_limit() {
        let l = support_lattice(&[(2, vec![1, 3]), (3, vec![2])], 100.0, 100).unwrap();
        let ns: Vec<u64> = l.iter().map(|e| e.0).collect();
        assert_eq!(ns, vec![1, 2, 8, 9, 18, 72]);
    }
}
