//! Enumeration of y-friable integers and multiplicatively weighted sums
//! over them.
//!
//! Sums are organised as a depth-first walk over products of prime powers
//! taken in ascending prime order. Once the remaining room X' is below
//! p_i², the only admissible completions are 1 and single primes
//! p_j <= X', so the whole subtree collapses to a prefix-sum lookup.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;

use super::primes::primes_up_to;
use super::spec::MultiplicativeSpec;
use crate::error::ArithError;
use crate::numeric::CompensatedSum;

/// Default cap on enumerated integers (or walk nodes for sums).
pub const DEFAULT_BUDGET: usize = 10_000_000;

/// Largest x accepted (x is floored to an integer).
pub const MAX_X: f64 = 9.0e18;

pub(crate) fn floor_x(x: f64) -> Result<u64, ArithError> {
    if !(x >= 1.0) || x > MAX_X {
        return Err(ArithError::Domain {
            name: "x",
            value: x,
            expected: "in [1, 9e18]",
        });
    }
    Ok(x.floor() as u64)
}

pub(crate) fn floor_y(y: f64) -> Result<u64, ArithError> {
    if !(y >= 1.0) || !y.is_finite() {
        return Err(ArithError::Domain {
            name: "y",
            value: y,
            expected: ">= 1",
        });
    }
    Ok(y.min(super::primes::MAX_PRIME_LIMIT as f64).floor() as u64)
}

/// The y-friable n <= x in ascending order, built from prime-power products.
pub fn enumerate_friable(x: f64, y: f64) -> Result<Vec<u64>, ArithError> {
    enumerate_friable_with_budget(x, y, DEFAULT_BUDGET)
}

pub fn enumerate_friable_with_budget(
    x: f64,
    y: f64,
    budget: usize,
) -> Result<Vec<u64>, ArithError> {
    let x = floor_x(x)?;
    let y = floor_y(y)?.min(x);
    let primes = primes_up_to(y)?;
    let mut out = vec![1u64];
    fn walk(
        ps: &[u64],
        n: u64,
        x: u64,
        out: &mut Vec<u64>,
        budget: usize,
    ) -> Result<(), ArithError> {
        for (i, &p) in ps.iter().enumerate() {
            if p > x / n {
                break;
            }
            let mut m = n * p;
            loop {
                out.push(m);
                if out.len() > budget {
                    return Err(ArithError::BudgetExceeded { budget });
                }
                walk(&ps[i + 1..], m, x, out, budget)?;
                if m > x / p {
                    break;
                }
                m *= p;
            }
        }
        Ok(())
    }
    walk(primes.primes(), 1, x, &mut out, budget)?;
    out.sort_unstable();
    Ok(out)
}

/// Σ_{n <= x, P(n) <= y} f(n) n^{-s} for s ∈ {0, 1}, together with the
/// number of walk nodes visited.
pub(crate) struct WeightedFriableSum {
    primes: Vec<u64>,
    /// coef[i][ν-1] = f(p_i^ν) p_i^{-νs}, for p_i^ν <= x
    coef: Vec<Vec<f64>>,
    /// compensated prefix sums of coef[i][0]: (hi, lo)
    prefix: Vec<(f64, f64)>,
}

impl WeightedFriableSum {
    pub fn new(x: u64, y: u64, spec: &MultiplicativeSpec, s: f64) -> Result<Self, ArithError> {
        let table = primes_up_to(y.min(x))?;
        let primes = table.primes().to_vec();
        let mut coef = Vec::with_capacity(primes.len());
        for &p in &primes {
            let mut row = Vec::new();
            let mut pk = p;
            let mut nu = 1;
            loop {
                let v = spec.value(p, nu)?;
                row.push(if s == 0.0 {
                    v
                } else {
                    v * (pk as f64).powf(-s)
                });
                match pk.checked_mul(p) {
                    Some(next) if next <= x => pk = next,
                    _ => break,
                }
                nu += 1;
            }
            coef.push(row);
        }
        let mut prefix = Vec::with_capacity(primes.len() + 1);
        let mut acc = CompensatedSum::new();
        prefix.push((0.0, 0.0));
        for row in &coef {
            acc.add(row[0]);
            prefix.push(acc.split());
        }
        Ok(WeightedFriableSum {
            primes,
            coef,
            prefix,
        })
    }

    // Σ of coef[j][0] over start <= j < end.
    fn prime_range(&self, start: usize, end: usize) -> f64 {
        if end <= start {
            return 0.0;
        }
        let (h1, l1) = self.prefix[end];
        let (h0, l0) = self.prefix[start];
        (h1 - h0) + (l1 - l0)
    }

    // Σ over m <= xr built from primes with index >= start, m = 1 included.
    fn subtree(&self, start: usize, xr: u64, nodes: &mut usize, cap: usize) -> Option<f64> {
        *nodes += 1;
        if *nodes > cap {
            return None;
        }
        let mut sum = CompensatedSum::new();
        sum.add(1.0);
        let ps = &self.primes;
        let mut i = start;
        while i < ps.len() && ps[i] <= xr {
            let p = ps[i];
            if p > xr / p {
                let end = ps.partition_point(|&q| q <= xr);
                sum.add(self.prime_range(i, end));
                break;
            }
            let mut pk = p;
            for &c in &self.coef[i] {
                if pk > xr {
                    break;
                }
                if c != 0.0 {
                    sum.add(c * self.subtree(i + 1, xr / pk, nodes, cap)?);
                }
                match pk.checked_mul(p) {
                    Some(next) => pk = next,
                    None => break,
                }
            }
            i += 1;
        }
        Some(sum.value())
    }

    /// Evaluates the sum up to x. Work is split into a fixed list of
    /// subtrees two levels deep, evaluated in parallel and reduced in list
    /// order, so the result does not depend on scheduling.
    pub fn evaluate(&self, x: u64, budget: usize) -> Result<f64, ArithError> {
        // (coefficient, start index, room); start == usize::MAX marks a constant
        let mut tasks: Vec<(f64, usize, u64)> = vec![(1.0, usize::MAX, 0)];
        let ps = &self.primes;
        let expand = |coef: f64, start: usize, xr: u64, out: &mut Vec<(f64, usize, u64)>| {
            let mut i = start;
            while i < ps.len() && ps[i] <= xr {
                let p = ps[i];
                if p > xr / p {
                    let end = ps.partition_point(|&q| q <= xr);
                    out.push((coef * self.prime_range(i, end), usize::MAX, 0));
                    break;
                }
                let mut pk = p;
                for &c in &self.coef[i] {
                    if pk > xr {
                        break;
                    }
                    if c != 0.0 {
                        out.push((coef * c, i + 1, xr / pk));
                    }
                    match pk.checked_mul(p) {
                        Some(next) => pk = next,
                        None => break,
                    }
                }
                i += 1;
            }
        };
        let mut level1 = Vec::new();
        expand(1.0, 0, x, &mut level1);
        for (c, start, xr) in level1 {
            if start == usize::MAX {
                tasks.push((c, start, xr));
            } else {
                // the subtree's own m = 1 term
                tasks.push((c, usize::MAX, 0));
                expand(c, start, xr, &mut tasks);
            }
        }

        let used = AtomicUsize::new(tasks.len());
        let failed = AtomicBool::new(false);
        let parts: Vec<f64> = tasks
            .par_iter()
            .map(|&(c, start, xr)| {
                if start == usize::MAX {
                    return c;
                }
                if failed.load(Ordering::Relaxed) {
                    return 0.0;
                }
                let mut nodes = 0usize;
                let cap = budget.saturating_sub(used.load(Ordering::Relaxed));
                let v = self.subtree(start, xr, &mut nodes, cap);
                let total = used.fetch_add(nodes, Ordering::Relaxed) + nodes;
                match v {
                    Some(v) if total <= budget => c * v,
                    _ => {
                        failed.store(true, Ordering::Relaxed);
                        0.0
                    }
                }
            })
            .collect();
        if failed.load(Ordering::Relaxed) || used.load(Ordering::Relaxed) > budget {
            return Err(ArithError::BudgetExceeded { budget });
        }
        Ok(parts.into_iter().collect::<CompensatedSum>().value())
    }
}
