use crate::error::SieveError;

/// Moduli up to this size are counted by scanning every residue.
pub const BRUTE_CAP: u64 = 1_000_000;
/// Singular Hensel nodes explored before giving up.
pub const MAX_LIFT_NODES: usize = 1 << 22;
/// Largest modulus handled (products stay inside u128).
pub const MAX_MODULUS: u64 = 1 << 62;

/// Integer polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Poly {
    coeffs: Vec<i64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn reduced(&self, m: u64) -> Vec<u128> {
        let m = m as i128;
        self.coeffs
            .iter()
            .map(|&c| (c as i128).rem_euclid(m) as u128)
            .collect()
    }

    /// G(x) mod m.
    pub fn eval_mod(&self, x: u64, m: u64) -> u64 {
        horner(&self.reduced(m), x as u128 % m as u128, m as u128) as u64
    }

    /// G(x) as an exact integer, if it fits.
    pub fn eval(&self, x: i128) -> Option<i128> {
        let mut acc: i128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(x)?.checked_add(c as i128)?;
        }
        Some(acc)
    }
}

fn horner(c: &[u128], x: u128, m: u128) -> u128 {
    let mut acc = 0u128;
    for &a in c.iter().rev() {
        acc = (acc * x + a) % m;
    }
    acc
}

fn checked_pow(p: u64, nu: u32) -> Result<u64, SieveError> {
    match p.checked_pow(nu) {
        Some(m) if m <= MAX_MODULUS => Ok(m),
        _ => Err(SieveError::ModulusTooLarge(p.saturating_pow(nu))),
    }
}

/// ϱ(p^ν; G) by scanning all residues.
pub fn count_roots_brute(p: u64, nu: u32, g: &Poly) -> Result<u64, SieveError> {
    let m = checked_pow(p, nu)?;
    if m > BRUTE_CAP {
        return Err(SieveError::ModulusTooLarge(m));
    }
    let c = g.reduced(m);
    Ok((0..m)
        .filter(|&x| horner(&c, x as u128, m as u128) == 0)
        .count() as u64)
}

/// ϱ(p^ν; G) by lifting the roots modulo p. Simple roots lift uniquely;
/// singular ones are expanded level by level, and a whole residue class is
/// counted at once when the Taylor expansion shows it vanishes identically.
pub fn count_roots_hensel(p: u64, nu: u32, g: &Poly) -> Result<u64, SieveError> {
    if nu == 0 {
        return Ok(1);
    }
    let m = checked_pow(p, nu)?;
    if p > BRUTE_CAP {
        return Err(SieveError::ModulusTooLarge(p));
    }
    let c = g.reduced(m);
    let mut total = 0u64;
    let mut nodes = 0usize;
    for r in 0..p {
        if horner(&c, r as u128, p as u128) == 0 {
            total += lift(&c, p, nu, m, r, 1, &mut nodes)?;
        }
    }
    Ok(total)
}

// Roots modulo p^nu above r, where G(r) ≡ 0 mod p^k.
fn lift(
    c: &[u128],
    p: u64,
    nu: u32,
    m: u64,
    r: u64,
    k: u32,
    nodes: &mut usize,
) -> Result<u64, SieveError> {
    let taylor = taylor_shift(c, r as u128, m as u128);
    // G(r + p^k t) = sum_i taylor[i] p^{k i} t^i
    let full = taylor
        .iter()
        .enumerate()
        .all(|(i, &a)| valuation(a, p, nu) as u64 + k as u64 * i as u64 >= nu as u64);
    if full {
        return Ok(p.pow(nu - k));
    }
    if taylor.len() > 1 && !taylor[1].is_multiple_of(p as u128) {
        // simple root: exactly one lift per level
        return Ok(1);
    }
    *nodes += 1;
    if *nodes > MAX_LIFT_NODES {
        return Err(SieveError::LiftDepth(MAX_LIFT_NODES));
    }
    let pk = p.pow(k);
    let next = pk * p;
    let mut total = 0;
    for t in 0..p {
        let child = r + t * pk;
        if horner(c, child as u128, next as u128) == 0 {
            total += lift(c, p, nu, m, child, k + 1, nodes)?;
        }
    }
    Ok(total)
}

// Coefficients of G(X + r) modulo m.
fn taylor_shift(c: &[u128], r: u128, m: u128) -> Vec<u128> {
    let mut a = c.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            a[j] = (a[j] + r * a[j + 1]) % m;
        }
    }
    a
}

// p-adic valuation of a residue modulo p^nu, capped at nu (0 counts as nu).
fn valuation(mut a: u128, p: u64, nu: u32) -> u32 {
    if a == 0 {
        return nu;
    }
    let mut v = 0;
    while a.is_multiple_of(p as u128) && v < nu {
        a /= p as u128;
        v += 1;
    }
    v
}

/// ϱ(p^ν; G): brute force up to [`BRUTE_CAP`], Hensel lifting above.
pub fn count_roots(p: u64, nu: u32, g: &Poly) -> Result<u64, SieveError> {
    let m = checked_pow(p, nu)?;
    if m <= BRUTE_CAP {
        count_roots_brute(p, nu, g)
    } else {
        count_roots_hensel(p, nu, g)
    }
}

/// ϱ(p^ν; G), rejecting the degenerate case where every residue is a root.
pub fn rho_poly(p: u64, nu: u32, g: &Poly) -> Result<u64, SieveError> {
    let n = count_roots(p, nu, g)?;
    let m = p.pow(nu);
    if n == m {
        return Err(SieveError::PolyVanishes { modulus: m });
    }
    Ok(n)
}

/// ϱ(d; G) for arbitrary d via the Chinese remainder theorem.
pub fn rho_poly_composite(d: u64, g: &Poly) -> Result<u64, SieveError> {
    crate::arith::factorize(d)
        .into_iter()
        .try_fold(1u64, |acc, (p, nu)| Ok(acc * count_roots(p, nu, g)?))
}
