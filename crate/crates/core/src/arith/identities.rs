//! Exact evaluation of the two functional equations satisfied by friable
//! sums.
//!
//! For a squarefree-supported f every y-friable n with f(n) != 0 divides
//! N = ∏ p (p <= y, f(p) > 0), so ψ*_f(·, y) is a finite step function and
//! every integral against dt/t becomes a finite sum of logarithms:
//!
//! * `∫_a^b ψ*_f(t, y) dt/t = Σ_{n > a} f(n)/n · log(min(n, b)/a)`
//! * `∫_1^x ψ_f(t) dt/t = Σ_{n <= x} f(n)/n · log(x/n)`

use serde::Serialize;

use super::friable::{enumerate_friable_with_budget, DEFAULT_BUDGET};
use super::hypothesis::PrimeDrift;
use super::primes::primes_up_to;
use super::spec::MultiplicativeSpec;
use crate::error::ArithError;
use crate::numeric::CompensatedSum;
use crate::specfn::Kappa;

/// Both sides of an identity and the three correction terms.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub terms: [f64; 3],
    /// largest magnitude among lhs, the main term and the corrections
    pub scale: f64,
}

impl IdentityCheck {
    fn new(lhs: f64, main: f64, terms: [f64; 3]) -> Self {
        let rhs = [main, terms[0], terms[1], terms[2]]
            .into_iter()
            .collect::<CompensatedSum>()
            .value();
        let scale = terms
            .iter()
            .fold(lhs.abs().max(main.abs()), |m, t| m.max(t.abs()));
        IdentityCheck {
            lhs,
            rhs,
            residual: lhs - rhs,
            terms,
            scale,
        }
    }

    /// |residual| relative to the largest term on either side (0 when all
    /// terms vanish). Both sides can cancel to nearly 0 while the
    /// corrections do not, so the sides alone are not a safe scale.
    pub fn relative_residual(&self) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            self.residual.abs() / self.scale
        }
    }
}

// (n, f(n)/n) over the divisors of N with f(n) != 0.
fn squarefree_support(
    y: f64,
    spec: &MultiplicativeSpec,
    budget: usize,
) -> Result<Vec<(u128, f64)>, ArithError> {
    let primes = primes_up_to(y.floor() as u64)?;
    let mut active = Vec::new();
    let mut primorial: u128 = 1;
    for &p in primes.primes() {
        let v = spec.value(p, 1)?;
        if v > 0.0 {
            primorial = primorial
                .checked_mul(p as u128)
                .ok_or(ArithError::PrimorialTooLarge(y))?;
            active.push((p as u128, v / p as f64));
        }
    }
    if active.len() >= usize::BITS as usize - 1 || (1usize << active.len()) > budget {
        return Err(ArithError::PrimorialTooLarge(y));
    }
    let mut out = vec![(1u128, 1.0)];
    for &(p, w) in &active {
        let len = out.len();
        for i in 0..len {
            let (n, v) = out[i];
            out.push((n * p, v * w));
        }
    }
    out.sort_by_key(|&(n, _)| n);
    Ok(out)
}

/// Tail functional identity: with ψ* = ψ*_f(·, y),
/// `ψ*(x) log x + ∫_x^∞ ψ*(t)/t dt = κ ∫_{x/y}^x ψ*(t)/t dt + E_1 + E_2 + E_3`,
/// where
/// `E_1 = Σ_{n > x/y} f(n)/n {r_f(y) - r_f(x/n)}`,
/// `E_2 = -Σ_{ν>=1} Σ_{p<=y} f(p) f(p^ν) log p / p^{ν+1} · ψ*_{f_p}(x/p^{ν+1}, y)`,
/// `E_3 = Σ_{ν>=2} Σ_{p<=y} f(p^ν) log p^ν / p^ν · ψ*_{f_p}(x/p^ν, y)`.
///
/// Evaluated exactly for squarefree-supported f (E_3 then vanishes).
pub fn verify_eq_7_3(
    x: f64,
    y: f64,
    kappa: Kappa,
    spec: &MultiplicativeSpec,
) -> Result<IdentityCheck, ArithError> {
    if !(x >= 2.0) || !(y >= 2.0) || !x.is_finite() || !y.is_finite() {
        return Err(ArithError::Domain {
            name: "x",
            value: x,
            expected: "x >= 2, y >= 2",
        });
    }
    if !spec.is_squarefree_supported() {
        return Err(ArithError::NotSquarefree);
    }
    let support = squarefree_support(y, spec, DEFAULT_BUDGET)?;
    let drift = PrimeDrift::new(y.floor() as u64, kappa, spec)?;
    let k = kappa.get();
    let lx = x.ln();
    let a = x / y;
    let ry = drift.r(y);

    let mut star = CompensatedSum::new();
    let mut beyond = CompensatedSum::new();
    let mut window = CompensatedSum::new();
    let mut e1 = CompensatedSum::new();
    for &(n, w) in &support {
        let nf = n as f64;
        if nf > x {
            star.add(w);
            beyond.add(w * (nf / x).ln());
        }
        if nf > a {
            window.add(w * (nf.min(x) / a).ln());
            e1.add(w * (ry - drift.r(x / nf)));
        }
    }
    let lhs = [star.value() * lx, beyond.value()]
        .into_iter()
        .collect::<CompensatedSum>()
        .value();

    // only ν = 1 survives in E_2
    let mut e2 = CompensatedSum::new();
    for &p in primes_up_to(y.floor() as u64)?.primes() {
        let fp = spec.value(p, 1)?;
        if fp == 0.0 {
            continue;
        }
        let pf = p as f64;
        let t = x / (pf * pf);
        let star_p: f64 = support
            .iter()
            .filter(|&&(n, _)| n % p as u128 != 0 && n as f64 > t)
            .map(|&(_, w)| w)
            .collect::<CompensatedSum>()
            .value();
        e2.add(-fp * fp * pf.ln() / (pf * pf) * star_p);
    }
    Ok(IdentityCheck::new(
        lhs,
        k * window.value(),
        [e1.value(), e2.value(), 0.0],
    ))
}

/// Diagonal functional identity: with ψ = ψ_f(·, ·) on the diagonal,
/// `ψ(x) log x = (κ + 1) ∫_1^x ψ(t)/t dt + D_1 + D_2 + D_3`,
/// where
/// `D_1 = Σ_{n<=x} f(n)/n r_f(x/n)`,
/// `D_2 = -Σ_{ν>=1} Σ_{p^{ν+1}<=x} f(p) f(p^ν) log p / p^{ν+1} · ψ_{f_p}(x/p^{ν+1})`,
/// `D_3 = Σ_{ν>=2} Σ_{p^ν<=x} f(p^ν) log p^ν / p^ν · ψ_{f_p}(x/p^ν)`.
pub fn verify_eq_8_2(
    x: f64,
    kappa: Kappa,
    spec: &MultiplicativeSpec,
) -> Result<IdentityCheck, ArithError> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(ArithError::Domain {
            name: "x",
            value: x,
            expected: ">= 1",
        });
    }
    let xi = x.floor() as u64;
    let ns = enumerate_friable_with_budget(x, x, DEFAULT_BUDGET)?;
    // (n, f(n)/n), ascending in n
    let mut rows = Vec::with_capacity(ns.len());
    for &n in &ns {
        let v = spec.f_value(n)?;
        rows.push((n, v / n as f64));
    }
    let drift = PrimeDrift::new(xi.max(1), kappa, spec)?;
    let k = kappa.get();
    let lx = x.ln();

    let mut psi = CompensatedSum::new();
    let mut integral = CompensatedSum::new();
    let mut d1 = CompensatedSum::new();
    for &(n, w) in &rows {
        psi.add(w);
        integral.add(w * (x / n as f64).ln());
        d1.add(w * drift.r(x / n as f64));
    }
    // ψ_{f_p}(t) for t <= x
    let psi_p = |p: u64, t: f64| -> f64 {
        rows.iter()
            .take_while(|&&(n, _)| n as f64 <= t)
            .filter(|&&(n, _)| n % p != 0)
            .map(|&(_, w)| w)
            .collect::<CompensatedSum>()
            .value()
    };
    let mut d2 = CompensatedSum::new();
    let mut d3 = CompensatedSum::new();
    for &p in primes_up_to(xi)?.primes() {
        let pf = p as f64;
        let fp = spec.value(p, 1)?;
        let mut nu = 1u32;
        let mut pk = p; // p^ν
        loop {
            let fpk = spec.value(p, nu)?;
            if nu >= 2 && fpk != 0.0 {
                d3.add(fpk * (pk as f64).ln() / pk as f64 * psi_p(p, x / pk as f64));
            }
            match pk.checked_mul(p) {
                Some(next) if next <= xi => {
                    if fp != 0.0 && fpk != 0.0 {
                        d2.add(-fp * fpk * pf.ln() / next as f64 * psi_p(p, x / next as f64));
                    }
                    pk = next;
                    nu += 1;
                }
                _ => break,
            }
        }
    }
    Ok(IdentityCheck::new(
        psi.value() * lx,
        (k + 1.0) * integral.value(),
        [d1.value(), d2.value(), d3.value()],
    ))
}
