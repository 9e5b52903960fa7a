use std::collections::{BTreeMap, BTreeSet};

use crate::arith::is_prime;
use crate::error::SieveError;

/// The classes W(p^ν) removed by the sieve, keyed by (p, ν).
///
/// Classes for distinct exponents of the same prime must be disjoint, so an
/// integer lies in W(p^ν) for at most one ν per prime.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueSystem {
    z: f64,
    entries: BTreeMap<(u64, u32), BTreeSet<u64>>,
}

impl ResidueSystem {
    pub fn new(z: f64, entries: BTreeMap<(u64, u32), BTreeSet<u64>>) -> Result<Self, SieveError> {
        if !(z >= 2.0) || !z.is_finite() {
            return Err(SieveError::Invalid(format!(
                "sieving level z = {z} must be >= 2"
            )));
        }
        for (&(p, nu), set) in &entries {
            if !is_prime(p) || nu == 0 {
                return Err(SieveError::Invalid(format!(
                    "{p}^{nu} is not a prime power"
                )));
            }
            if p as f64 > z {
                return Err(SieveError::Invalid(format!("prime {p} exceeds z = {z}")));
            }
            let m = modulus(p, nu)?;
            if let Some(&r) = set.iter().find(|&&r| r >= m) {
                return Err(SieveError::Invalid(format!(
                    "residue {r} is not reduced modulo {p}^{nu}"
                )));
            }
        }
        let sys = ResidueSystem { z, entries };
        sys.check_disjoint()?;
        Ok(sys)
    }

    // W(p^μ) ∩ W(p^ν) = ∅: no class mod p^ν reduces into W(p^μ), μ < ν.
    fn check_disjoint(&self) -> Result<(), SieveError> {
        for (&(p, nu), set) in &self.entries {
            for (&(q, mu), low) in self.entries.range((p, 1)..(p, nu)) {
                debug_assert_eq!(q, p);
                let pm = p.pow(mu);
                if set.iter().any(|r| low.contains(&(r % pm))) {
                    return Err(SieveError::Overlap { p, mu, nu });
                }
            }
        }
        Ok(())
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn entries(&self) -> &BTreeMap<(u64, u32), BTreeSet<u64>> {
        &self.entries
    }

    pub fn classes(&self, p: u64, nu: u32) -> Option<&BTreeSet<u64>> {
        self.entries.get(&(p, nu))
    }

    /// Primes carrying at least one nonempty class.
    pub fn primes(&self) -> BTreeSet<u64> {
        self.entries
            .iter()
            .filter(|(_, s)| !s.is_empty())
            .map(|(&(p, _), _)| p)
            .collect()
    }

    /// Restriction to the primes of `keep`.
    pub fn restricted(&self, keep: &BTreeSet<u64>) -> Self {
        ResidueSystem {
            z: self.z,
            entries: self
                .entries
                .iter()
                .filter(|((p, _), _)| keep.contains(p))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }
}

pub(crate) fn modulus(p: u64, nu: u32) -> Result<u64, SieveError> {
    match p.checked_pow(nu) {
        Some(m) if m <= super::poly::MAX_MODULUS => Ok(m),
        _ => Err(SieveError::ModulusTooLarge(p.saturating_pow(nu))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(items: &[((u64, u32), &[u64])]) -> Result<ResidueSystem, SieveError> {
        let entries = items
            .iter()
            .map(|&(k, v)| (k, v.iter().copied().collect()))
            .collect();
        ResidueSystem::new(10.0, entries)
    }

    #[test]
    fn disjoint_levels_accepted() {
        // 1 mod 2 and 2 mod 4 never meet
        assert!(sys(&[((2, 1), &[1]), ((2, 2), &[2]), ((3, 1), &[0])]).is_ok());
    }

    #[test]
    fn overlapping_levels_rejected() {
        // 3 mod 4 reduces to 1 mod 2
        assert_eq!(
            sys(&[((2, 1), &[1]), ((2, 2), &[3])]),
            Err(SieveError::Overlap { p: 2, mu: 1, nu: 2 })
        );
    }

    #[test]
    fn malformed_entries_rejected() {
        assert!(sys(&[((4, 1), &[0])]).is_err());
        assert!(sys(&[((3, 1), &[3])]).is_err());
        assert!(sys(&[((11, 1), &[0])]).is_err());
    }
}
