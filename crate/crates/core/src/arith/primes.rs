use crate::error::ArithError;

/// Largest limit accepted by [`primes_up_to`] (one byte of sieve per integer).
pub const MAX_PRIME_LIMIT: u64 = 400_000_000;

/// The primes up to `limit`, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// π(x) for x <= limit.
    pub fn count_up_to(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p <= x)
    }

    /// The primes p <= x.
    pub fn up_to(&self, x: u64) -> &[u64] {
        &self.primes[..self.count_up_to(x)]
    }
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Result<PrimeTable, ArithError> {
    if limit > MAX_PRIME_LIMIT {
        return Err(ArithError::PrimeLimit(limit));
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    Ok(PrimeTable { limit, primes })
}

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Largest prime factor, with P(1) = 1.
pub fn largest_prime_factor(n: u64) -> u64 {
    factorize(n).last().map(|&(p, _)| p).unwrap_or(1)
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn small_tables() {
        assert!(primes_up_to(1).unwrap().is_empty());
        assert_eq!(primes_up_to(10).unwrap().primes(), &[2, 3, 5, 7]);
        assert_eq!(primes_up_to(2).unwrap().primes(), &[2]);
    }

    #[test]
    fn matches_trial_division_to_1e5() {
        let t = primes_up_to(100_000).unwrap();
        assert_eq!(t.len(), 9592);
        let oracle: Vec<u64> = (1..=100_000).filter(|&n| trial_division(n)).collect();
        assert_eq!(t.primes(), oracle.as_slice());
        assert_eq!(t.count_up_to(100), 25);
    }

    #[test]
    fn rejects_huge_limit() {
        assert!(primes_up_to(MAX_PRIME_LIMIT + 1).is_err());
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
        assert_eq!(largest_prime_factor(1), 1);
        assert_eq!(largest_prime_factor(12), 3);
        assert!(is_prime(2) && !is_prime(1) && !is_prime(91));
    }
}
