//! Selberg's upper bound S(A, P; z) <= X/ψ_f(D, z) + Σ_{m<=D², P(m)<=z} 3^{ω(m)} |r_m|
//! and the exact sifted count.
//!
//! Every a ∈ A has a *profile*: the prime powers p^ν with a ∈ W(p^ν), at
//! most one per prime by disjointness. Then a ∈ W(m) iff every component of
//! m lies in the profile of a, so one pass over A yields all the counts
//! |{a ∈ A : a ∈ W(m)}|, the sifted count (empty profiles), and the Selberg
//! square Σ_a (Σ_{a ∈ W(d)} λ_d)².

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::instance::{RemainderMode, SieveInstance};
use super::weights::{support_lattice, SelbergWeights};
use crate::arith::{psi_f_with_budget, DEFAULT_BUDGET};
use crate::error::SieveError;
use crate::numeric::{fmt_e12, CompensatedSum};

type Profile = Vec<(u64, u32)>;

#[derive(Clone, Copy, Debug)]
pub struct BoundOptions {
    /// Cap on |A| and on the number of moduli enumerated.
    pub budget: usize,
    /// Compute the sifted count even when the remainders are supplied.
    pub brute: bool,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions {
            budget: DEFAULT_BUDGET,
            brute: true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SieveReport {
    pub id: String,
    pub x_mass: f64,
    pub d_level: f64,
    pub z: f64,
    /// X/ψ_f(D, z)
    pub main_term: f64,
    /// Σ 3^{ω(m)} |r_m|
    pub remainder: f64,
    pub bound: f64,
    /// S(A, P; z), when computed
    pub brute_count: Option<u64>,
    pub weights_max_abs: f64,
    pub lambda_one: f64,
    /// ψ_f(D, z) from the friable-sum evaluator
    pub psi_f: f64,
    /// Σ λ*_d λ*_{d'} ε(d, d') w([d, d'])/[d, d']
    pub quadratic_form: f64,
    /// Σ_a (Σ_{a ∈ W(d)} λ*_d)², when A was scanned
    pub selberg_sum: Option<f64>,
}

impl SieveReport {
    pub const CSV_HEADER: &'static str = "id,X,D,z,main_term,remainder,bound,brute_count,ratio";

    /// bound / brute_count (NaN if the count is unknown).
    pub fn ratio(&self) -> f64 {
        match self.brute_count {
            Some(c) => self.bound / c as f64,
            None => f64::NAN,
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.id,
            fmt_e12(self.x_mass),
            fmt_e12(self.d_level),
            fmt_e12(self.z),
            fmt_e12(self.main_term),
            fmt_e12(self.remainder),
            fmt_e12(self.bound),
            self.brute_count.map_or(String::new(), |c| c.to_string()),
            fmt_e12(self.ratio()),
        )
    }

    /// Relative gap between the quadratic form and 1/ψ_f(D, z).
    pub fn quadratic_form_residual(&self) -> f64 {
        (self.quadratic_form * self.psi_f - 1.0).abs()
    }
}

fn profiles(inst: &SieveInstance, budget: usize) -> Result<BTreeMap<Profile, u64>, SieveError> {
    let len = inst.sequence().len();
    if len > budget as u64 {
        return Err(SieveError::BudgetExceeded {
            len: len as usize,
            budget,
        });
    }
    let classes: Vec<((u64, u32), u64, &std::collections::BTreeSet<u64>)> = inst
        .residues()
        .entries()
        .iter()
        .filter(|(_, s)| !s.is_empty())
        .map(|(&(p, nu), s)| ((p, nu), p.pow(nu), s))
        .collect();
    let seq = inst.sequence();
    let map = (0..len)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<Profile, u64>, i| {
            let mut prof = Vec::new();
            for &(pp, m, set) in &classes {
                if prof.last().is_some_and(|&(q, _)| q == pp.0) {
                    continue;
                }
                if set.contains(&seq.residue(i, m)) {
                    prof.push(pp);
                }
            }
            *acc.entry(prof).or_insert(0) += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    Ok(map)
}

// Sub-products of a profile not exceeding `limit`, with their multiplicity.
fn subset_products(prof: &Profile, limit: f64, mut visit: impl FnMut(u64)) {
    fn rec(prof: &[(u64, u32)], acc: u64, limit: f64, visit: &mut impl FnMut(u64)) {
        match prof.split_first() {
            None => visit(acc),
            Some((&(p, nu), rest)) => {
                rec(rest, acc, limit, visit);
                if let Some(n) = p.checked_pow(nu).and_then(|pk| acc.checked_mul(pk)) {
                    if n as f64 <= limit {
                        rec(rest, n, limit, visit);
                    }
                }
            }
        }
    }
    rec(prof, 1, limit, &mut visit);
}

/// One remainder r_m = |{a ∈ A : a ∈ W(m)}| - w(m) X/m.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RemainderTerm {
    pub m: u64,
    pub omega: usize,
    pub r: f64,
}

fn subset_counts(prof: &BTreeMap<Profile, u64>, limit: f64) -> HashMap<u64, u64> {
    let mut counts = HashMap::new();
    for (pr, &c) in prof {
        subset_products(pr, limit, |m| *counts.entry(m).or_insert(0) += c);
    }
    counts
}

// The z-friable m <= D² whose components all carry a class or a positive
// density; every other r_m vanishes.
fn remainder_terms_from(
    inst: &SieveInstance,
    counts: Option<&HashMap<u64, u64>>,
    budget: usize,
) -> Result<Vec<RemainderTerm>, SieveError> {
    let density = inst.density();
    let x = inst.x_mass();
    let d2 = inst.d_level() * inst.d_level();
    let options: Vec<(u64, Vec<u32>)> = inst
        .primes()
        .iter()
        .map(|&p| {
            let mut exps: Vec<u32> = inst
                .residues()
                .entries()
                .range((p, 1)..=(p, u32::MAX))
                .filter(|(_, s)| !s.is_empty())
                .map(|(&(_, nu), _)| nu)
                .chain(
                    density
                        .entries()
                        .range((p, 1)..=(p, u32::MAX))
                        .filter(|(_, &v)| v > 0.0)
                        .map(|(&(_, nu), _)| nu),
                )
                .collect();
            exps.sort_unstable();
            exps.dedup();
            (p, exps)
        })
        .filter(|(_, e)| !e.is_empty())
        .collect();
    let mut out = Vec::new();
    for (m, fm) in support_lattice(&options, d2, budget)? {
        let expected: f64 = fm
            .iter()
            .map(|&(p, nu)| density.w(p, nu) / (p as f64).powi(nu as i32))
            .product::<f64>()
            * x;
        let nonempty = fm.iter().all(|&(p, nu)| {
            inst.residues()
                .classes(p, nu)
                .is_some_and(|s| !s.is_empty())
        });
        let r = match inst.remainders() {
            RemainderMode::Exact => {
                counts.expect("scanned").get(&m).copied().unwrap_or(0) as f64 - expected
            }
            RemainderMode::Supplied(r) => match r.get(&m) {
                Some(&v) => v,
                None if !nonempty => -expected,
                None => return Err(SieveError::MissingRemainder(m)),
            },
        };
        out.push(RemainderTerm {
            m,
            omega: fm.len(),
            r,
        });
    }
    Ok(out)
}

/// Every nonzero-candidate remainder r_m, m <= D², in increasing m.
pub fn remainder_terms(
    inst: &SieveInstance,
    budget: usize,
) -> Result<Vec<RemainderTerm>, SieveError> {
    let counts = match inst.remainders() {
        RemainderMode::Exact => Some(subset_counts(
            &profiles(inst, budget)?,
            inst.d_level() * inst.d_level(),
        )),
        RemainderMode::Supplied(_) => None,
    };
    remainder_terms_from(inst, counts.as_ref(), budget)
}

/// Σ_{m <= D², P(m) <= z} 3^{ω(m)} |r_m|.
pub fn remainder_bound(inst: &SieveInstance) -> Result<f64, SieveError> {
    Ok(remainder_terms(inst, DEFAULT_BUDGET)?
        .into_iter()
        .map(|t| 3f64.powi(t.omega as i32) * t.r.abs())
        .collect::<CompensatedSum>()
        .value())
}

/// X/ψ_f(D, z) with f(p^ν) = p^ν/ϑ(p^ν) - p^ν/ϑ(p^{ν-1}).
pub fn main_term(inst: &SieveInstance) -> Result<f64, SieveError> {
    let spec = inst.density().to_spec()?;
    Ok(inst.x_mass() / psi_f_with_budget(inst.d_level(), inst.z(), &spec, DEFAULT_BUDGET)?)
}

/// λ*_d for the instance (0 for d > D).
pub fn lambda_star(inst: &SieveInstance, d: u64) -> Result<f64, SieveError> {
    Ok(SelbergWeights::new(inst.density(), inst.d_level(), DEFAULT_BUDGET)?.lambda(d))
}

/// S(A, P; z) by testing every element against every class.
pub fn brute_count(inst: &SieveInstance, budget: usize) -> Result<u64, SieveError> {
    Ok(profiles(inst, budget)?
        .get(&Vec::new())
        .copied()
        .unwrap_or(0))
}

pub fn sieve_bound(inst: &SieveInstance) -> Result<SieveReport, SieveError> {
    sieve_bound_with(inst, BoundOptions::default())
}

pub fn sieve_bound_with(
    inst: &SieveInstance,
    opts: BoundOptions,
) -> Result<SieveReport, SieveError> {
    let density = inst.density();
    let d_level = inst.d_level();
    let x = inst.x_mass();
    let weights = SelbergWeights::new(density, d_level, opts.budget)?;
    let spec = density.to_spec()?;
    let psi = psi_f_with_budget(d_level, inst.z(), &spec, opts.budget)?;
    let main_term = x / psi;

    let scan = matches!(inst.remainders(), RemainderMode::Exact) || opts.brute;
    let prof = if scan {
        Some(profiles(inst, opts.budget)?)
    } else {
        None
    };

    let counts = prof.as_ref().map(|p| subset_counts(p, d_level * d_level));
    let remainder = remainder_terms_from(inst, counts.as_ref(), opts.budget)?
        .into_iter()
        .map(|t| 3f64.powi(t.omega as i32) * t.r.abs())
        .collect::<CompensatedSum>()
        .value();

    let selberg_sum = prof.as_ref().map(|prof| {
        let mut acc = CompensatedSum::new();
        for (pr, &c) in prof {
            let mut inner = CompensatedSum::new();
            subset_products(pr, d_level, |d| inner.add(weights.lambda(d)));
            let v = inner.value();
            acc.add(c as f64 * v * v);
        }
        acc.value()
    });

    Ok(SieveReport {
        id: inst.id.clone().unwrap_or_default(),
        x_mass: x,
        d_level,
        z: inst.z(),
        main_term,
        remainder,
        bound: main_term + remainder,
        brute_count: prof.map(|p| p.get(&Vec::new()).copied().unwrap_or(0)),
        weights_max_abs: weights.max_abs(),
        lambda_one: weights.lambda(1),
        psi_f: psi,
        quadratic_form: weights.quadratic_form(density),
        selberg_sum,
    })
}
