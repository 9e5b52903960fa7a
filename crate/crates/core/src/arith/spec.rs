use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::primes::factorize;
use crate::error::ArithError;
use crate::sieve::{count_roots, Poly};

/// How the prime-power values f(p^ν) are produced.
#[derive(Clone, Debug, PartialEq)]
pub enum SpecKind {
    /// f(p^ν) = binom(κ + ν - 1, ν), the κ-th divisor function.
    TauKappa { kappa: f64 },
    /// f(p) = c and f(p^ν) = 0 for ν >= 2.
    SquarefreeUniform { c: f64 },
    /// f(p^ν) = ϱ(p^ν; G), the number of roots of G modulo p^ν.
    PolyDensity { poly: Poly },
    /// Listed values; every other prime power takes `default`.
    Table {
        entries: BTreeMap<(u64, u32), f64>,
        default: f64,
    },
}

/// A nonnegative multiplicative function given by its values on prime powers.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicativeSpec {
    kind: SpecKind,
    eta: f64,
    series_cutoff: u32,
    excluded: BTreeSet<u64>,
}

pub const DEFAULT_ETA: f64 = 0.25;
pub const DEFAULT_SERIES_CUTOFF: u32 = 40;

impl MultiplicativeSpec {
    pub fn new(kind: SpecKind) -> Result<Self, ArithError> {
        let spec = MultiplicativeSpec {
            kind,
            eta: DEFAULT_ETA,
            series_cutoff: DEFAULT_SERIES_CUTOFF,
            excluded: BTreeSet::new(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn tau_kappa(kappa: f64) -> Result<Self, ArithError> {
        Self::new(SpecKind::TauKappa { kappa })
    }

    /// f ≡ 1.
    pub fn one() -> Self {
        Self::tau_kappa(1.0).expect("valid")
    }

    pub fn squarefree_uniform(c: f64) -> Result<Self, ArithError> {
        Self::new(SpecKind::SquarefreeUniform { c })
    }

    pub fn poly_density(coeffs: Vec<i64>) -> Result<Self, ArithError> {
        Self::new(SpecKind::PolyDensity {
            poly: Poly::new(coeffs),
        })
    }

    pub fn table(entries: BTreeMap<(u64, u32), f64>, default: f64) -> Result<Self, ArithError> {
        Self::new(SpecKind::Table { entries, default })
    }

    /// Squarefree table from prime values f(p); other primes get 0.
    pub fn squarefree_table(
        values: impl IntoIterator<Item = (u64, f64)>,
    ) -> Result<Self, ArithError> {
        Self::table(values.into_iter().map(|(p, v)| ((p, 1), v)).collect(), 0.0)
    }

    pub fn with_eta(mut self, eta: f64) -> Result<Self, ArithError> {
        self.eta = eta;
        self.validate()?;
        Ok(self)
    }

    pub fn with_series_cutoff(mut self, cutoff: u32) -> Result<Self, ArithError> {
        self.series_cutoff = cutoff;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<(), ArithError> {
        let bad = |msg: String| Err(ArithError::InvalidSpec(msg));
        if !(self.eta > 0.0 && self.eta < 0.5) {
            return bad(format!("eta must lie in (0, 1/2), got {}", self.eta));
        }
        if self.series_cutoff < 2 {
            return bad("series_cutoff must be at least 2".into());
        }
        match &self.kind {
            SpecKind::TauKappa { kappa } if !(*kappa > 0.0 && kappa.is_finite()) => {
                bad(format!("kappa must be positive, got {kappa}"))
            }
            SpecKind::SquarefreeUniform { c } if !(*c >= 0.0 && c.is_finite()) => {
                bad(format!("c must be nonnegative, got {c}"))
            }
            SpecKind::PolyDensity { poly } if poly.coeffs() == [0] => {
                bad("the zero polynomial has no finite root density".into())
            }
            SpecKind::Table { entries, default } => {
                if !(*default >= 0.0 && default.is_finite()) {
                    return bad(format!("default must be nonnegative, got {default}"));
                }
                for (&(p, nu), &v) in entries {
                    if !super::primes::is_prime(p) || nu == 0 {
                        return bad(format!("{p}^{nu} is not a prime power"));
                    }
                    if !(v >= 0.0 && v.is_finite()) {
                        return bad(format!("f({p}^{nu}) = {v} must be nonnegative"));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn kind(&self) -> &SpecKind {
        &self.kind
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn series_cutoff(&self) -> u32 {
        self.series_cutoff
    }

    pub fn excluded_primes(&self) -> &BTreeSet<u64> {
        &self.excluded
    }

    /// The spec of f_m: zero at every p^ν with p | m.
    pub fn restricted(&self, m: u64) -> Self {
        let mut out = self.clone();
        out.excluded
            .extend(factorize(m).into_iter().map(|(p, _)| p));
        out
    }

    /// True when f vanishes on every p^ν with ν >= 2.
    pub fn is_squarefree_supported(&self) -> bool {
        match &self.kind {
            SpecKind::SquarefreeUniform { .. } => true,
            SpecKind::Table { entries, default } => {
                *default == 0.0 && entries.iter().all(|(&(_, nu), &v)| nu == 1 || v == 0.0)
            }
            _ => false,
        }
    }

    /// f(p^ν) for a prime p.
    pub fn value(&self, p: u64, nu: u32) -> Result<f64, ArithError> {
        if nu == 0 {
            return Ok(1.0);
        }
        if self.excluded.contains(&p) {
            return Ok(0.0);
        }
        Ok(match &self.kind {
            SpecKind::TauKappa { kappa } => binomial_rising(*kappa, nu),
            SpecKind::SquarefreeUniform { c } => {
                if nu == 1 {
                    *c
                } else {
                    0.0
                }
            }
            SpecKind::PolyDensity { poly } => count_roots(p, nu, poly)
                .map_err(|e| ArithError::InvalidSpec(format!("root count at {p}^{nu}: {e}")))?
                as f64,
            SpecKind::Table { entries, default } => *entries.get(&(p, nu)).unwrap_or(default),
        })
    }

    /// f(n) = ∏ f(p^ν) over p^ν ∥ n.
    pub fn f_value(&self, n: u64) -> Result<f64, ArithError> {
        if n == 0 {
            return Err(ArithError::Domain {
                name: "n",
                value: 0.0,
                expected: ">= 1",
            });
        }
        let mut acc = 1.0;
        for (p, nu) in factorize(n) {
            acc *= self.value(p, nu)?;
            if acc == 0.0 {
                break;
            }
        }
        Ok(acc)
    }

    /// Σ_{ν>=0} f(p^ν) p^{-νs} and an upper bound on its truncation error.
    pub fn local_factor(&self, p: u64, s: f64) -> Result<(f64, f64), ArithError> {
        let (h, err) = self.higher_sum(p, s)?;
        Ok((1.0 + self.value(p, 1)? * (p as f64).powf(-s) + h, err))
    }

    /// K-part of the local factor: Σ_{ν>=2} f(p^ν) p^{-νs}, with error bound.
    pub fn higher_sum(&self, p: u64, s: f64) -> Result<(f64, f64), ArithError> {
        if self.excluded.contains(&p) {
            return Ok((0.0, 0.0));
        }
        let x = (p as f64).powf(-s);
        if !(x < 1.0) {
            return Err(ArithError::DivergentLocalFactor { p, ratio: x });
        }
        match &self.kind {
            SpecKind::SquarefreeUniform { .. } => Ok((0.0, 0.0)),
            SpecKind::TauKappa { kappa } => {
                let k = *kappa;
                if x > 0.5 {
                    // no cancellation to fear when x is large
                    Ok(((1.0 - x).powf(-k) - 1.0 - k * x, 0.0))
                } else {
                    // Σ_{ν>=2} binom(κ+ν-1, ν) x^ν, terms eventually decrease geometrically
                    let mut term = k * x;
                    let mut sum = 0.0;
                    let mut nu = 1.0;
                    loop {
                        term *= x * (k + nu) / (nu + 1.0);
                        nu += 1.0;
                        sum += term;
                        if term <= 1e-18 * sum || term == 0.0 {
                            break;
                        }
                    }
                    Ok((sum, 0.0))
                }
            }
            SpecKind::Table { entries, default } => {
                let mut sum = 0.0;
                let mut listed_geo = 0.0;
                for (&(q, nu), &v) in entries.range((p, 2)..=(p, u32::MAX)) {
                    debug_assert_eq!(q, p);
                    let w = x.powi(nu as i32);
                    sum += v * w;
                    listed_geo += w;
                }
                if *default > 0.0 {
                    let geo = x * x / (1.0 - x);
                    sum += default * (geo - listed_geo).max(0.0);
                }
                Ok((sum, 0.0))
            }
            SpecKind::PolyDensity { .. } => self.poly_higher_sum(p, s),
        }
    }

    fn poly_higher_sum(&self, p: u64, s: f64) -> Result<(f64, f64), ArithError> {
        let pf = p as f64;
        let mut sum = 0.0;
        let mut prev_term = self.value(p, 1)? * pf.powf(-s);
        let mut ratio: f64 = 0.0;
        let max_nu = ((62.0 / pf.log2()).floor() as u32).max(1);
        let mut nu = 2;
        loop {
            if nu > max_nu {
                break;
            }
            let term = self.value(p, nu)? * pf.powf(-s * nu as f64);
            sum += term;
            if prev_term > 0.0 {
                ratio = ratio.max(term / prev_term);
            }
            prev_term = term;
            if nu >= self.series_cutoff && (term == 0.0 || term <= 1e-17 * (1.0 + sum)) {
                break;
            }
            nu += 1;
        }
        // ϱ(p^{ν+1}) <= p ϱ(p^ν), so the tail ratio never exceeds p^{1-s}
        let r = ratio.max(pf.powf(-s)).min(pf.powf(1.0 - s));
        if !(r < 1.0) {
            return Err(ArithError::DivergentLocalFactor { p, ratio: r });
        }
        let tail = prev_term * r / (1.0 - r);
        Ok((sum, tail))
    }

    /// Upper bound for Σ_{p>z} Σ_{ν>=2} f(p^ν) p^{-νs}, for s > 1/2.
    pub fn higher_tail_bound(&self, z: f64, s: f64) -> Result<f64, ArithError> {
        if !(s > 0.5) {
            return Err(ArithError::Domain {
                name: "sigma",
                value: s,
                expected: "> 1/2",
            });
        }
        let z = z.max(2.0);
        let x0 = z.powf(-s);
        // Σ_{n>z} n^{-2s} <= z^{1-2s}/(2s-1) + z^{-2s}
        let prime_sum = z.powf(1.0 - 2.0 * s) / (2.0 * s - 1.0) + z.powf(-2.0 * s);
        let per_prime = match &self.kind {
            SpecKind::SquarefreeUniform { .. } => 0.0,
            // the ν>=2 part divided by x^2 increases with x
            SpecKind::TauKappa { kappa } => {
                let k = *kappa;
                ((1.0 - x0).powf(-k) - 1.0 - k * x0) / (x0 * x0)
            }
            SpecKind::Table { entries, default } => {
                let listed: f64 = entries
                    .iter()
                    .filter(|(&(p, nu), _)| p as f64 > z && nu >= 2)
                    .map(|(&(p, nu), &v)| v * (p as f64).powf(-s * nu as f64))
                    .sum();
                return Ok(listed + default / (1.0 - x0) * prime_sum);
            }
            // for p not dividing the discriminant ϱ(p^ν) = ϱ(p) <= deg G
            SpecKind::PolyDensity { poly } => poly.degree() as f64 / (1.0 - x0),
        };
        Ok(per_prime * prime_sum)
    }

    /// Spec as a JSON document.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SpecDoc::from(self)).expect("spec serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, ArithError> {
        let doc: SpecDoc =
            serde_json::from_str(s).map_err(|e| ArithError::InvalidSpec(e.to_string()))?;
        doc.try_into()
    }
}

/// binom(κ + ν - 1, ν) = κ(κ+1)...(κ+ν-1)/ν!.
pub fn binomial_rising(kappa: f64, nu: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..nu {
        acc *= (kappa + i as f64) / (i as f64 + 1.0);
    }
    acc
}

/// JSON form; unknown keys are rejected.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    poly_coeffs: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    entries: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    default: Option<f64>,
    #[serde(default = "default_eta")]
    eta: f64,
    #[serde(default = "default_cutoff")]
    series_cutoff: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    excluded_primes: Vec<u64>,
}

fn default_eta() -> f64 {
    DEFAULT_ETA
}

fn default_cutoff() -> u32 {
    DEFAULT_SERIES_CUTOFF
}

/// Parses a "p^nu" key (a bare "p" means ν = 1).
pub fn parse_prime_power(key: &str) -> Option<(u64, u32)> {
    let key = key.trim();
    match key.split_once('^') {
        Some((p, nu)) => Some((p.trim().parse().ok()?, nu.trim().parse().ok()?)),
        None => Some((key.parse().ok()?, 1)),
    }
}

impl From<&MultiplicativeSpec> for SpecDoc {
    fn from(s: &MultiplicativeSpec) -> Self {
        let mut doc = SpecDoc {
            kind: String::new(),
            kappa: None,
            c: None,
            poly_coeffs: None,
            entries: None,
            default: None,
            eta: s.eta,
            series_cutoff: s.series_cutoff,
            excluded_primes: s.excluded.iter().copied().collect(),
        };
        match &s.kind {
            SpecKind::TauKappa { kappa } => {
                doc.kind = "tau_kappa".into();
                doc.kappa = Some(*kappa);
            }
            SpecKind::SquarefreeUniform { c } => {
                doc.kind = "squarefree_uniform".into();
                doc.c = Some(*c);
            }
            SpecKind::PolyDensity { poly } => {
                doc.kind = "poly_density".into();
                doc.poly_coeffs = Some(poly.coeffs().to_vec());
            }
            SpecKind::Table { entries, default } => {
                doc.kind = "table".into();
                doc.entries = Some(
                    entries
                        .iter()
                        .map(|(&(p, nu), &v)| (format!("{p}^{nu}"), v))
                        .collect(),
                );
                doc.default = Some(*default);
            }
        }
        doc
    }
}

impl TryFrom<SpecDoc> for MultiplicativeSpec {
    type Error = ArithError;

    fn try_from(d: SpecDoc) -> Result<Self, ArithError> {
        let unexpected = |field: &str| {
            Err(ArithError::InvalidSpec(format!(
                "field `{field}` does not apply to kind `{}`",
                d.kind
            )))
        };
        let missing =
            |field: &str| ArithError::InvalidSpec(format!("kind `{}` requires `{field}`", d.kind));
        let kind = match d.kind.as_str() {
            "tau_kappa" => {
                if d.c.is_some()
                    || d.poly_coeffs.is_some()
                    || d.entries.is_some()
                    || d.default.is_some()
                {
                    return unexpected("c/poly_coeffs/entries/default");
                }
                SpecKind::TauKappa {
                    kappa: d.kappa.ok_or_else(|| missing("kappa"))?,
                }
            }
            "squarefree_uniform" => {
                if d.kappa.is_some()
                    || d.poly_coeffs.is_some()
                    || d.entries.is_some()
                    || d.default.is_some()
                {
                    return unexpected("kappa/poly_coeffs/entries/default");
                }
                SpecKind::SquarefreeUniform {
                    c: d.c.ok_or_else(|| missing("c"))?,
                }
            }
            "poly_density" => {
                if d.kappa.is_some() || d.c.is_some() || d.entries.is_some() || d.default.is_some()
                {
                    return unexpected("kappa/c/entries/default");
                }
                SpecKind::PolyDensity {
                    poly: Poly::new(
                        d.poly_coeffs
                            .clone()
                            .ok_or_else(|| missing("poly_coeffs"))?,
                    ),
                }
            }
            "table" => {
                if d.kappa.is_some() || d.c.is_some() || d.poly_coeffs.is_some() {
                    return unexpected("kappa/c/poly_coeffs");
                }
                let raw = d.entries.clone().ok_or_else(|| missing("entries"))?;
                let mut entries = BTreeMap::new();
                for (k, v) in raw {
                    let key = parse_prime_power(&k).ok_or_else(|| {
                        ArithError::InvalidSpec(format!("bad prime-power key `{k}`"))
                    })?;
                    entries.insert(key, v);
                }
                SpecKind::Table {
                    entries,
                    default: d.default.unwrap_or(0.0),
                }
            }
            other => return Err(ArithError::InvalidSpec(format!("unknown kind `{other}`"))),
        };
        let mut spec = MultiplicativeSpec::new(kind)?
            .with_eta(d.eta)?
            .with_series_cutoff(d.series_cutoff)?;
        for p in d.excluded_primes {
            if !super::primes::is_prime(p) {
                return Err(ArithError::InvalidSpec(format!(
                    "excluded prime {p} is not prime"
                )));
            }
            spec.excluded.insert(p);
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_value_examples() {
        let one = MultiplicativeSpec::one();
        for n in [1, 2, 12, 97, 1000] {
            assert_eq!(one.f_value(n).unwrap(), 1.0);
        }
        let tau2 = MultiplicativeSpec::tau_kappa(2.0).unwrap();
        assert_eq!(tau2.f_value(12).unwrap(), 6.0);
        let sf = MultiplicativeSpec::squarefree_uniform(2.5).unwrap();
        assert_eq!(sf.f_value(4).unwrap(), 0.0);
        assert_eq!(sf.f_value(6).unwrap(), 6.25);
    }

    #[test]
    fn restriction() {
        let one = MultiplicativeSpec::one();
        assert_eq!(one.restricted(1), one);
        let f2 = one.restricted(2);
        assert_eq!(f2.f_value(6).unwrap(), 0.0);
        assert_eq!(f2.f_value(15).unwrap(), 1.0);
    }

    #[test]
    fn local_factors_closed_forms() {
        let one = MultiplicativeSpec::one();
        let (v, e) = one.local_factor(2, 1.0).unwrap();
        assert!((v - 2.0).abs() < 1e-15 && e == 0.0);
        let tau = MultiplicativeSpec::tau_kappa(1.7).unwrap();
        for &p in &[2u64, 3, 101, 10007] {
            let (v, _) = tau.local_factor(p, 1.0).unwrap();
            let want = (1.0 - 1.0 / p as f64).powf(-1.7);
            assert!((v / want - 1.0).abs() < 1e-14, "p={p}");
        }
        // default geometric tail of a table
        let t = MultiplicativeSpec::table(BTreeMap::from([((2, 1), 3.0)]), 1.0).unwrap();
        let (v, _) = t.local_factor(2, 1.0).unwrap();
        assert!((v - (1.0 + 1.5 + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn poly_local_factor() {
        // G = X: ϱ(p^ν) = 1, local factor = 1/(1 - 1/p)
        let g = MultiplicativeSpec::poly_density(vec![0, 1]).unwrap();
        let (v, e) = g.local_factor(3, 1.0).unwrap();
        assert!((v - 1.5).abs() < 1e-12);
        assert!(e < 1e-15);
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let specs = [
            MultiplicativeSpec::tau_kappa(2.0).unwrap(),
            MultiplicativeSpec::squarefree_uniform(0.5)
                .unwrap()
                .restricted(6),
            MultiplicativeSpec::poly_density(vec![-1, 0, 1]).unwrap(),
            MultiplicativeSpec::table(BTreeMap::from([((2, 1), 1.5), ((3, 2), 0.25)]), 0.0)
                .unwrap(),
        ];
        for s in specs {
            assert_eq!(MultiplicativeSpec::from_json(&s.to_json()).unwrap(), s);
        }
        assert!(
            MultiplicativeSpec::from_json(r#"{"kind":"tau_kappa","kappa":1,"extra":1}"#).is_err()
        );
        assert!(MultiplicativeSpec::from_json(r#"{"kind":"tau_kappa","c":1}"#).is_err());
        assert!(MultiplicativeSpec::from_json(r#"{"kind":"nope"}"#).is_err());
        assert!(MultiplicativeSpec::from_json(r#"{"kind":"table","entries":{"4^1":1}}"#).is_err());
        let s = MultiplicativeSpec::from_json(r#"{"kind":"squarefree_uniform","c":1,"eta":0.3}"#)
            .unwrap();
        assert_eq!(s.eta(), 0.3);
        assert!(
            MultiplicativeSpec::from_json(r#"{"kind":"tau_kappa","kappa":1,"eta":0.7}"#).is_err()
        );
    }

    #[test]
    fn squarefree_support() {
        assert!(MultiplicativeSpec::squarefree_uniform(1.0)
            .unwrap()
            .is_squarefree_supported());
        assert!(!MultiplicativeSpec::one().is_squarefree_supported());
        assert!(MultiplicativeSpec::squarefree_table([(2, 1.0), (5, 0.5)])
            .unwrap()
            .is_squarefree_supported());
    }
}
