use serde::Serialize;

use super::bound::{sieve_bound_with, BoundOptions, SieveReport};
use super::instance::SieveInstance;
use super::poly::{count_roots, Poly};
use crate::arith::factorize;
use crate::error::SieveError;
use crate::specfn::RhoTable;

/// Sieve report for {n ∈ I : p^ν ∥ q ⇒ p^ν ∤ G(n)} with the local data.
#[derive(Clone, Debug, Serialize)]
pub struct CorollaryReport {
    pub sieve: SieveReport,
    /// ∏_{p^ν ∥ q} (1 - ϱ(p^ν; G)/p^ν)
    pub w_q: f64,
    /// 1/log(3 + ω(q)), reported only
    pub delta_q: f64,
    /// (p, ν, ϱ(p^ν; G)) for p^ν ∥ q
    pub local_roots: Vec<(u64, u32, u64)>,
    /// G vanishes identically modulo some p^ν ∥ q, so nothing survives.
    pub vanishing: bool,
}

/// Runs the prime-power sieve on A = {G(n) : start <= n <= end} with
/// W(p^ν) = {0} for p^ν ∥ q, X = N and D = √N by default.
pub fn corollary_4_3_driver(
    start: i64,
    end: i64,
    q: u64,
    poly: &Poly,
    d_level: Option<f64>,
    opts: BoundOptions,
) -> Result<CorollaryReport, SieveError> {
    if end < start || q == 0 {
        return Err(SieveError::Invalid(format!(
            "need start <= end and q >= 1, got [{start}, {end}], q = {q}"
        )));
    }
    let fq = factorize(q);
    let mut local_roots = Vec::with_capacity(fq.len());
    let mut w_q = 1.0;
    let mut vanishing = false;
    for &(p, nu) in &fq {
        let rho = count_roots(p, nu, poly)?;
        let m = p.pow(nu);
        vanishing |= rho == m;
        w_q *= 1.0 - rho as f64 / m as f64;
        local_roots.push((p, nu, rho));
    }
    let delta_q = 1.0 / (3.0 + fq.len() as f64).ln();
    let n = (end as i128 - start as i128 + 1) as f64;
    let sieve = if vanishing {
        // every G(n) is divisible by the offending p^ν: the sifted set is empty
        let z = fq.last().map_or(2.0, |&(p, _)| (p as f64).max(2.0));
        SieveReport {
            id: String::new(),
            x_mass: n,
            d_level: d_level.unwrap_or(n.sqrt()),
            z,
            main_term: 0.0,
            remainder: 0.0,
            bound: 0.0,
            brute_count: Some(0),
            weights_max_abs: 1.0,
            lambda_one: 1.0,
            psi_f: f64::INFINITY,
            quadratic_form: 0.0,
            selberg_sum: None,
        }
    } else {
        let inst = SieveInstance::interval_poly(start, end, q, poly.clone(), d_level)?;
        sieve_bound_with(&inst, opts)?
    };
    Ok(CorollaryReport {
        sieve,
        w_q,
        delta_q,
        local_roots,
        vanishing,
    })
}

/// The level v and the functions entering the envelope for the sieve bound
/// `X W(z)/j_κ(v)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EnvelopeCor42 {
    pub v: f64,
    pub j_kappa_v: f64,
    /// λ_κ(v) v log(1 + v)
    pub lambda_plus: f64,
}

/// v = min{log D/(s log z), 3 log D/(s η log log D)} and j_κ(v), λ⁺_κ(v),
/// with κ taken from the table. The second term is dropped when
/// log log D <= 0.
pub fn envelope_cor_4_2(
    d: f64,
    z: f64,
    s: u32,
    eta: f64,
    table: &RhoTable,
) -> Result<EnvelopeCor42, SieveError> {
    if !(z >= 2.0) || !(d > z) || !d.is_finite() || s == 0 || !(eta > 0.0) {
        return Err(SieveError::Invalid(format!(
            "need D > z >= 2, s >= 1, eta > 0; got D = {d}, z = {z}, s = {s}, eta = {eta}"
        )));
    }
    let ld = d.ln();
    let s = s as f64;
    let mut v = ld / (s * z.ln());
    let llog = ld.ln();
    if llog > 0.0 {
        v = v.min(3.0 * ld / (s * eta * llog));
    }
    let lambda = table.lambda(v)?;
    Ok(EnvelopeCor42 {
        v,
        j_kappa_v: table.j(v)?,
        lambda_plus: lambda * v * v.ln_1p(),
    })
}
