//! Seeded test corpora. Case `i` of a corpus draws from its own ChaCha8
//! stream, so a single failing case can be regenerated from (seed, i).

use std::collections::{BTreeMap, BTreeSet};

use friable_core::arith::{primes_up_to, MultiplicativeSpec};
use friable_core::sieve::{Poly, ResidueSystem, SieveInstance};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SQUAREFREE_CASES: u64 = 50;
pub const SIEVE_CASES: u64 = 100;
pub const POLY_CASES: usize = 20;

const SQUAREFREE_STREAM: u64 = 0;
const SIEVE_STREAM: u64 = 1 << 32;
const POLY_STREAM: u64 = 2 << 32;

pub fn case_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A squarefree-supported f with f(p) uniform in [0, 3] on a random 80% of
/// the primes below 50, and a point x <= 10^4, y <= 50.
#[derive(Clone, Debug)]
pub struct SquarefreeCase {
    pub x: f64,
    pub y: f64,
    pub spec: MultiplicativeSpec,
}

pub fn squarefree_case(seed: u64, i: u64) -> SquarefreeCase {
    let mut rng = case_rng(seed, SQUAREFREE_STREAM + i);
    let y = rng.random_range(2.0..=50.0f64);
    let x = rng.random_range(2.0..=1e4f64);
    let primes = primes_up_to(50).expect("small table");
    let values: Vec<(u64, f64)> = primes
        .primes()
        .iter()
        .map(|&p| {
            (
                p,
                if rng.random_bool(0.8) {
                    rng.random_range(0.0..=3.0)
                } else {
                    0.0
                },
            )
        })
        .collect();
    SquarefreeCase {
        x,
        y,
        spec: MultiplicativeSpec::squarefree_table(values).expect("valid table"),
    }
}

/// Disjoint classes modulo p and p² for a random subset of the primes <= z.
/// At most half the classes modulo p and a quarter of the remaining classes
/// modulo p² are removed, so every ϑ stays positive.
pub fn random_residues(rng: &mut ChaCha8Rng, z: u64) -> ResidueSystem {
    let mut entries = BTreeMap::new();
    for &p in primes_up_to(z).expect("small table").primes() {
        if !rng.random_bool(0.7) {
            continue;
        }
        let k1 = rng.random_range(0..=(p - 1).div_ceil(2)) as usize;
        let w1: BTreeSet<u64> = sample(rng, p as usize, k1)
            .into_iter()
            .map(|r| r as u64)
            .collect();
        let free: Vec<u64> = (0..p * p).filter(|r| !w1.contains(&(r % p))).collect();
        let k2 = rng.random_range(0..=free.len() / 4);
        let w2: BTreeSet<u64> = sample(rng, free.len(), k2)
            .into_iter()
            .map(|j| free[j])
            .collect();
        if !w1.is_empty() {
            entries.insert((p, 1), w1);
        }
        if !w2.is_empty() {
            entries.insert((p, 2), w2);
        }
    }
    ResidueSystem::new(z as f64, entries).expect("disjoint by construction")
}

/// An explicit instance: |A| <= 10^4 integers in [-10^6, 10^6], z <= 30,
/// D in [2, 200], w(p^ν) = |W(p^ν)|.
pub fn sieve_instance(seed: u64, i: u64) -> SieveInstance {
    let mut rng = case_rng(seed, SIEVE_STREAM + i);
    let z = rng.random_range(2..=30u64);
    let residues = random_residues(&mut rng, z);
    let n = rng.random_range(1..=10_000usize);
    let a = (0..n)
        .map(|_| rng.random_range(-1_000_000..=1_000_000i64))
        .collect();
    let d = rng.random_range(2.0..=200.0f64);
    SieveInstance::explicit(a, residues, d)
        .expect("valid instance")
        .with_id(format!("s{seed}-{i}"))
}

/// Twenty polynomials of degree <= 4: eight with singular roots modulo small
/// primes, the rest random with coefficients in [-50, 50].
pub fn poly_corpus(seed: u64) -> Vec<Poly> {
    let mut out = vec![
        Poly::new(vec![-1, 0, 1]),
        Poly::new(vec![0, 0, 1]),
        Poly::new(vec![1, 0, 1]),
        Poly::new(vec![0, 1, 1]),
        Poly::new(vec![0, 0, 0, 0, 1]),
        Poly::new(vec![4, 0, 0, 0, 1]),
        Poly::new(vec![-2, 0, 0, 1]),
        Poly::new(vec![9, 6, 1]),
    ];
    let mut rng = case_rng(seed, POLY_STREAM);
    while out.len() < POLY_CASES {
        let deg = rng.random_range(1..=4usize);
        let mut c: Vec<i64> = (0..deg).map(|_| rng.random_range(-50..=50)).collect();
        c.push(rng.random_range(1..=12));
        out.push(Poly::new(c));
    }
    out
}
