use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::density::DensityFunction;
use super::poly::{count_roots, Poly};
use super::residue::{modulus, ResidueSystem};
use crate::arith::{factorize, parse_prime_power};
use crate::error::SieveError;

/// The finite sequence A being sifted.
#[derive(Clone, Debug, PartialEq)]
pub enum Sequence {
    /// An explicit multiset of integers.
    Explicit(Vec<i64>),
    /// {G(n) : start <= n <= end}, sifted by the prime powers exactly
    /// dividing q.
    IntervalPoly {
        start: i64,
        end: i64,
        q: u64,
        poly: Poly,
    },
}

impl Sequence {
    pub fn len(&self) -> u64 {
        match self {
            Sequence::Explicit(a) => a.len() as u64,
            Sequence::IntervalPoly { start, end, .. } => (end - start + 1) as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The i-th element reduced modulo m.
    pub fn residue(&self, i: u64, m: u64) -> u64 {
        match self {
            Sequence::Explicit(a) => (a[i as usize] as i128).rem_euclid(m as i128) as u64,
            Sequence::IntervalPoly { start, poly, .. } => {
                let n = (*start as i128 + i as i128).rem_euclid(m as i128) as u64;
                poly.eval_mod(n, m)
            }
        }
    }
}

/// How the remainders r_d are obtained.
#[derive(Clone, Debug, PartialEq)]
pub enum RemainderMode {
    /// Counted from A.
    Exact,
    /// Given per modulus m; moduli with W(m) = ∅ default to -w(m) X/m.
    Supplied(BTreeMap<u64, f64>),
}

/// A validated sieve problem: sift A by the classes W(p^ν), p ∈ P, p <= z.
#[derive(Clone, Debug)]
pub struct SieveInstance {
    pub id: Option<String>,
    sequence: Sequence,
    residues: ResidueSystem,
    primes: BTreeSet<u64>,
    d_level: f64,
    x_mass: f64,
    density: DensityFunction,
    remainders: RemainderMode,
}

impl SieveInstance {
    /// Classes outside P_z are dropped; w must vanish there.
    pub fn new(
        sequence: Sequence,
        residues: ResidueSystem,
        primes: Option<BTreeSet<u64>>,
        d_level: f64,
        x_mass: f64,
        density: DensityFunction,
        remainders: RemainderMode,
    ) -> Result<Self, SieveError> {
        if !(d_level > 1.0) || !d_level.is_finite() {
            return Err(SieveError::Invalid(format!(
                "level D = {d_level} must exceed 1"
            )));
        }
        if !(x_mass >= 0.0) || !x_mass.is_finite() {
            return Err(SieveError::Invalid(format!(
                "X = {x_mass} must be nonnegative"
            )));
        }
        let z = residues.z();
        let primes: BTreeSet<u64> = primes
            .unwrap_or_else(|| {
                residues
                    .primes()
                    .into_iter()
                    .chain(density.primes())
                    .collect()
            })
            .into_iter()
            .filter(|&p| p as f64 <= z)
            .collect();
        if let Some(&(p, nu)) = density
            .entries()
            .iter()
            .find(|(&(p, _), &v)| v > 0.0 && !primes.contains(&p))
            .map(|(k, _)| k)
        {
            return Err(SieveError::Invalid(format!(
                "w({p}^{nu}) > 0 but {p} is not a sieving prime <= z"
            )));
        }
        let residues = residues.restricted(&primes);
        Ok(SieveInstance {
            id: None,
            sequence,
            residues,
            primes,
            d_level,
            x_mass,
            density,
            remainders,
        })
    }

    /// A explicit, w(p^ν) = |W(p^ν)|, X = |A|.
    pub fn explicit(
        a: Vec<i64>,
        residues: ResidueSystem,
        d_level: f64,
    ) -> Result<Self, SieveError> {
        let w = residues
            .entries()
            .iter()
            .filter(|(_, s)| !s.is_empty())
            .map(|(&k, s)| (k, s.len() as f64))
            .collect();
        let x = a.len() as f64;
        Self::new(
            Sequence::Explicit(a),
            residues,
            None,
            d_level,
            x,
            DensityFunction::new(w)?,
            RemainderMode::Exact,
        )
    }

    /// The polynomial-values problem: A = {G(n) : n ∈ [start, end]},
    /// W(p^ν) = {0} for p^ν ∥ q, w(p^ν) = ϱ(p^ν; G), X = N, z = P(q), and
    /// D = √N unless given.
    pub fn interval_poly(
        start: i64,
        end: i64,
        q: u64,
        poly: Poly,
        d_level: Option<f64>,
    ) -> Result<Self, SieveError> {
        if end < start {
            return Err(SieveError::Invalid(format!(
                "empty interval [{start}, {end}]"
            )));
        }
        if q == 0 {
            return Err(SieveError::Invalid("q must be positive".into()));
        }
        let n = (end as i128 - start as i128 + 1) as f64;
        let fq = factorize(q);
        let z = fq.last().map_or(2.0, |&(p, _)| (p as f64).max(2.0));
        let mut entries = BTreeMap::new();
        let mut w = BTreeMap::new();
        for &(p, nu) in &fq {
            modulus(p, nu)?;
            entries.insert((p, nu), BTreeSet::from([0u64]));
            w.insert((p, nu), count_roots(p, nu, &poly)? as f64);
        }
        let residues = ResidueSystem::new(z, entries)?;
        let primes = fq.iter().map(|&(p, _)| p).collect();
        let d_level = d_level.unwrap_or(n.sqrt());
        Self::new(
            Sequence::IntervalPoly {
                start,
                end,
                q,
                poly,
            },
            residues,
            Some(primes),
            d_level,
            n,
            DensityFunction::new(w)?,
            RemainderMode::Exact,
        )
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }

    pub fn sequence(&self) -> &Sequence {
        &self.sequence
    }

    pub fn residues(&self) -> &ResidueSystem {
        &self.residues
    }

    pub fn primes(&self) -> &BTreeSet<u64> {
        &self.primes
    }

    pub fn z(&self) -> f64 {
        self.residues.z()
    }

    pub fn d_level(&self) -> f64 {
        self.d_level
    }

    pub fn x_mass(&self) -> f64 {
        self.x_mass
    }

    pub fn density(&self) -> &DensityFunction {
        &self.density
    }

    pub fn remainders(&self) -> &RemainderMode {
        &self.remainders
    }

    pub fn from_json(s: &str) -> Result<Self, SieveError> {
        let doc: InstanceDoc =
            serde_json::from_str(s).map_err(|e| SieveError::Invalid(e.to_string()))?;
        doc.into_instance()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&InstanceDoc::from_instance(self)).expect("serializable")
    }
}

#[derive(Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    a: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    interval: Option<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    poly_coeffs: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    z: Option<f64>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    d: Option<f64>,
    #[serde(rename = "W", default, skip_serializing_if = "Option::is_none")]
    classes: Option<BTreeMap<String, Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    w: Option<BTreeMap<String, f64>>,
    #[serde(rename = "X", default, skip_serializing_if = "Option::is_none")]
    x: Option<f64>,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    primes: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<BTreeMap<String, f64>>,
}

fn key(k: &str) -> Result<(u64, u32), SieveError> {
    parse_prime_power(k).ok_or_else(|| SieveError::Invalid(format!("bad prime-power key {k:?}")))
}

impl InstanceDoc {
    fn into_instance(self) -> Result<SieveInstance, SieveError> {
        let bad = |m: &str| Err(SieveError::Invalid(m.into()));
        let inst = match self.kind.as_str() {
            "interval_poly" => {
                if self.a.is_some()
                    || self.z.is_some()
                    || self.classes.is_some()
                    || self.w.is_some()
                    || self.x.is_some()
                    || self.primes.is_some()
                    || self.r.is_some()
                {
                    return bad("interval_poly instances derive z, W, w, X, P and r from (interval, q, poly_coeffs)");
                }
                let Some([lo, hi]) = self.interval else {
                    return bad("interval_poly needs \"interval\": [start, end]");
                };
                let Some(coeffs) = self.poly_coeffs else {
                    return bad("interval_poly needs \"poly_coeffs\"");
                };
                SieveInstance::interval_poly(
                    lo,
                    hi,
                    self.q.unwrap_or(1),
                    Poly::new(coeffs),
                    self.d,
                )?
            }
            "explicit" => {
                if self.interval.is_some() || self.q.is_some() || self.poly_coeffs.is_some() {
                    return bad("explicit instances take \"A\", not interval/q/poly_coeffs");
                }
                let Some(a) = self.a else {
                    return bad("explicit instance needs \"A\"");
                };
                let mut entries = BTreeMap::new();
                for (k, v) in self.classes.unwrap_or_default() {
                    entries.insert(key(&k)?, v.into_iter().collect::<BTreeSet<u64>>());
                }
                let z = match self.z {
                    Some(z) => z,
                    None => entries.keys().map(|&(p, _)| p as f64).fold(2.0, f64::max),
                };
                let residues = ResidueSystem::new(z, entries)?;
                let density = match self.w {
                    Some(w) => DensityFunction::new(
                        w.into_iter()
                            .map(|(k, v)| Ok((key(&k)?, v)))
                            .collect::<Result<_, SieveError>>()?,
                    )?,
                    None => DensityFunction::new(
                        residues
                            .entries()
                            .iter()
                            .filter(|(_, s)| !s.is_empty())
                            .map(|(&k, s)| (k, s.len() as f64))
                            .collect(),
                    )?,
                };
                let x = self.x.unwrap_or(a.len() as f64);
                let d = self.d.unwrap_or(x.sqrt());
                let remainders = match self.r {
                    None => RemainderMode::Exact,
                    Some(r) => RemainderMode::Supplied(
                        r.into_iter()
                            .map(|(k, v)| {
                                k.trim().parse::<u64>().map(|m| (m, v)).map_err(|_| {
                                    SieveError::Invalid(format!("bad modulus key {k:?}"))
                                })
                            })
                            .collect::<Result<_, _>>()?,
                    ),
                };
                SieveInstance::new(
                    Sequence::Explicit(a),
                    residues,
                    self.primes.map(|p| p.into_iter().collect()),
                    d,
                    x,
                    density,
                    remainders,
                )?
            }
            other => {
                return Err(SieveError::Invalid(format!(
                    "unknown instance kind {other:?}"
                )))
            }
        };
        Ok(match self.id {
            Some(id) => inst.with_id(id),
            None => inst,
        })
    }

    fn from_instance(inst: &SieveInstance) -> Self {
        let pp = |&(p, nu): &(u64, u32)| format!("{p}^{nu}");
        match &inst.sequence {
            Sequence::IntervalPoly {
                start,
                end,
                q,
                poly,
            } => InstanceDoc {
                kind: "interval_poly".into(),
                id: inst.id.clone(),
                interval: Some([*start, *end]),
                q: Some(*q),
                poly_coeffs: Some(poly.coeffs().to_vec()),
                d: Some(inst.d_level),
                ..Default::default()
            },
            Sequence::Explicit(a) => InstanceDoc {
                kind: "explicit".into(),
                id: inst.id.clone(),
                a: Some(a.clone()),
                z: Some(inst.z()),
                d: Some(inst.d_level),
                classes: Some(
                    inst.residues
                        .entries()
                        .iter()
                        .map(|(k, v)| (pp(k), v.iter().copied().collect()))
                        .collect(),
                ),
                w: Some(
                    inst.density
                        .entries()
                        .iter()
                        .map(|(k, &v)| (pp(k), v))
                        .collect(),
                ),
                x: Some(inst.x_mass),
                primes: Some(inst.primes.iter().copied().collect()),
                r: match &inst.remainders {
                    RemainderMode::Exact => None,
                    RemainderMode::Supplied(r) => {
                        Some(r.iter().map(|(m, &v)| (m.to_string(), v)).collect())
                    }
                },
                ..Default::default()
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_json_round_trip() {
        let src = r#"{"kind": "explicit", "A": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
                      "z": 3, "D": 3, "W": {"2^1": [0], "3^1": [1]}}"#;
        let inst = SieveInstance::from_json(src).unwrap();
        assert_eq!(inst.x_mass(), 10.0);
        assert_eq!(inst.density().w(3, 1), 1.0);
        let back = SieveInstance::from_json(&inst.to_json()).unwrap();
        assert_eq!(back.sequence(), inst.sequence());
        assert_eq!(back.density(), inst.density());
    }

    #[test]
    fn interval_poly_json() {
        let src = r#"{"kind": "interval_poly", "interval": [1, 5000], "q": 15, "poly_coeffs": [-1, 0, 1]}"#;
        let inst = SieveInstance::from_json(src).unwrap();
        assert_eq!(inst.z(), 5.0);
        assert_eq!(inst.density().w(3, 1), 2.0);
        assert_eq!(inst.density().w(5, 1), 2.0);
        assert!((inst.d_level() - 5000f64.sqrt()).abs() < 1e-12);
        assert_eq!(inst.sequence().residue(0, 3), 0); // G(1) = 0
        assert_eq!(inst.sequence().residue(2, 3), 2); // G(3) = 8
    }

    #[test]
    fn rejects_bad_documents() {
        for src in [
            r#"{"kind": "explicit", "A": [1], "W": {"2^1": [1], "2^2": [3]}, "D": 2}"#,
            r#"{"kind": "explicit", "A": [1], "W": {"2^1": [0, 1]}, "D": 2}"#,
            r#"{"kind": "interval_poly", "interval": [1, 10], "q": 2, "poly_coeffs": [1], "z": 3}"#,
            r#"{"kind": "explicit", "A": [1], "D": 2, "bogus": 1}"#,
            r#"{"kind": "explicit", "A": [1], "D": 1}"#,
            r#"{"kind": "nope"}"#,
        ] {
            assert!(SieveInstance::from_json(src).is_err(), "{src}");
        }
    }
}
