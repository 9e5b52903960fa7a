use std::collections::{BTreeMap, BTreeSet};

use friable_core::arith::primes_up_to;
use friable_core::sieve::{
    corollary_4_3_driver, count_roots_brute, count_roots_hensel, rho_poly_composite,
    sieve_bound_with, BoundOptions, DensityFunction, Poly, ResidueSystem, SelbergWeights,
    SieveInstance,
};
use proptest::prelude::*;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Disjoint classes modulo p and p² for a random set of primes <= z, keeping
/// at least one surviving class at each level.
fn random_residues(rng: &mut ChaCha8Rng, z: u64) -> ResidueSystem {
    let mut entries = BTreeMap::new();
    for &p in primes_up_to(z).unwrap().primes() {
        if !rng.random_bool(0.7) {
            continue;
        }
        let k1 = rng.random_range(0..=(p - 1).div_ceil(2));
        let w1: BTreeSet<u64> = sample(rng, p as usize, k1 as usize)
            .into_iter()
            .map(|r| r as u64)
            .collect();
        let free: Vec<u64> = (0..p * p).filter(|r| !w1.contains(&(r % p))).collect();
        let k2 = rng.random_range(0..=free.len() / 4);
        let w2: BTreeSet<u64> = sample(rng, free.len(), k2)
            .into_iter()
            .map(|i| free[i])
            .collect();
        if !w1.is_empty() {
            entries.insert((p, 1), w1);
        }
        if !w2.is_empty() {
            entries.insert((p, 2), w2);
        }
    }
    ResidueSystem::new(z as f64, entries).unwrap()
}

fn random_instance(seed: u64) -> SieveInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = rng.random_range(2..=30u64);
    let residues = random_residues(&mut rng, z);
    let n = rng.random_range(1..=10_000usize);
    let a = (0..n)
        .map(|_| rng.random_range(-1_000_000..=1_000_000i64))
        .collect();
    let d = rng.random_range(2.0..=200.0f64);
    SieveInstance::explicit(a, residues, d).unwrap()
}

#[test]
fn random_instances_obey_the_bound() {
    for seed in 0..100 {
        let r = sieve_bound_with(&random_instance(seed), BoundOptions::default()).unwrap();
        let c = r.brute_count.unwrap() as f64;
        let s = r.selberg_sum.unwrap();
        let slack = 1e-9 * r.bound.max(1.0);
        assert!(c <= s + slack, "seed {seed}: count {c} > selberg sum {s}");
        assert!(
            s <= r.bound + slack,
            "seed {seed}: selberg sum {s} > bound {}",
            r.bound
        );
        assert_eq!(r.lambda_one, 1.0, "seed {seed}");
        assert!(
            r.weights_max_abs <= 1.0 + 1e-12,
            "seed {seed}: {}",
            r.weights_max_abs
        );
        assert!(
            r.quadratic_form_residual() <= 1e-9,
            "seed {seed}: {}",
            r.quadratic_form_residual()
        );
    }
}

#[test]
fn theta_is_decreasing_and_f_nonnegative() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let res = random_residues(&mut rng, 40);
        let w = res
            .entries()
            .iter()
            .map(|(&k, s)| (k, s.len() as f64))
            .collect();
        let dens = DensityFunction::new(w).unwrap();
        for p in res.primes() {
            let mut prev = 1.0;
            for nu in 1..=2 {
                let t = dens.theta(p, nu).unwrap();
                assert!(t > 0.0 && t <= prev);
                assert!(dens.f_local(p, nu).unwrap() >= 0.0);
                prev = t;
            }
        }
    }
}

#[test]
fn weights_on_prime_square_classes() {
    // one class modulo p and modulo p^2 for p <= 7, solved at D = 50
    let mut w = BTreeMap::new();
    for p in [2u64, 3, 5, 7] {
        w.insert((p, 1), 1.0);
        w.insert((p, 2), 1.0);
    }
    let dens = DensityFunction::new(w).unwrap();
    let sw = SelbergWeights::new(&dens, 50.0, 1_000_000).unwrap();
    let q0 = sw.quadratic_form(&dens);
    assert!((q0 * sw.denominator() - 1.0).abs() < 1e-12);
    assert_eq!(sw.lambda(1), 1.0);
    assert!(sw.support().iter().all(|x| x.d as f64 <= 50.0));
}

fn poly_corpus() -> Vec<Poly> {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut out = vec![
        Poly::new(vec![-1, 0, 1]),
        Poly::new(vec![0, 0, 1]),
        Poly::new(vec![1, 0, 1]),
        Poly::new(vec![0, 1, 1]),
        Poly::new(vec![0, 0, 0, 0, 1]),
        Poly::new(vec![4, 0, 0, 0, 1]),
        Poly::new(vec![-2, 0, 0, 1]),
        Poly::new(vec![0, 0, 0, 1]),
    ];
    while out.len() < 20 {
        let deg = rng.random_range(1..=4usize);
        let mut c: Vec<i64> = (0..deg).map(|_| rng.random_range(-50..=50)).collect();
        c.push(rng.random_range(1..=12));
        out.push(Poly::new(c));
    }
    out
}

#[test]
fn hensel_matches_brute_force() {
    let primes = primes_up_to(10_000).unwrap();
    for g in poly_corpus() {
        for &p in primes.primes() {
            let mut pk = p;
            let mut nu = 1;
            while pk <= 10_000 {
                assert_eq!(
                    count_roots_hensel(p, nu, &g).unwrap(),
                    count_roots_brute(p, nu, &g).unwrap(),
                    "{:?} mod {p}^{nu}",
                    g.coeffs()
                );
                pk *= p;
                nu += 1;
            }
        }
    }
}

#[test]
fn rho_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let small = primes_up_to(50).unwrap();
    let squarefull = |rng: &mut ChaCha8Rng| loop {
        let mut d = 1u64;
        for &p in small.primes() {
            if rng.random_bool(0.3) {
                d = d.saturating_mul(p.pow(rng.random_range(2..=4)));
            }
        }
        if d <= 100_000 {
            return d;
        }
    };
    for g in poly_corpus().iter().take(8) {
        for i in 0..40 {
            let d = if i % 2 == 0 {
                squarefull(&mut rng)
            } else {
                rng.random_range(1..=100_000u64)
            };
            let brute = (0..d).filter(|&x| g.eval_mod(x, d) == 0).count() as u64;
            assert_eq!(
                rho_poly_composite(d, g).unwrap(),
                brute,
                "{:?} mod {d}",
                g.coeffs()
            );
        }
    }
}

#[test]
fn polynomial_example() {
    let g = Poly::new(vec![-1, 0, 1]);
    for p in [3u64, 5] {
        assert_eq!(count_roots_brute(p, 1, &g).unwrap(), 2);
        assert_eq!(count_roots_hensel(p, 1, &g).unwrap(), 2);
    }
    let r = corollary_4_3_driver(1, 5000, 15, &g, None, BoundOptions::default()).unwrap();
    let c = r.sieve.brute_count.unwrap();
    // n ≡ 0 mod 3 and n ≢ ±1 mod 5
    let oracle = (1..=5000u64)
        .filter(|n| n % 3 == 0 && n % 5 != 1 && n % 5 != 4)
        .count() as u64;
    assert_eq!(c, oracle);
    assert_eq!(c, 1000);
    assert!(c as f64 <= r.sieve.bound);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn corollary_bound_holds(start in -2000i64..2000, len in 2i64..3000, q in 1u64..400, a in -20i64..20, b in -20i64..20) {
        let g = Poly::new(vec![b, a, 1]);
        let r = corollary_4_3_driver(start, start + len - 1, q, &g, None, BoundOptions::default()).unwrap();
        let c = r.sieve.brute_count.unwrap() as f64;
        prop_assert!(c <= r.sieve.bound * (1.0 + 1e-12) + 1e-9);
        prop_assert!(r.w_q >= 0.0 && r.w_q <= 1.0);
    }

    #[test]
    fn remainders_bounded_by_root_counts(start in -500i64..500, len in 2i64..2000, q in 1u64..200) {
        let g = Poly::new(vec![-1, 0, 1]);
        let inst = SieveInstance::interval_poly(start, start + len - 1, q, g.clone(), None).unwrap();
        for t in friable_core::sieve::remainder_terms(&inst, 1_000_000).unwrap() {
            prop_assert!(t.r.abs() <= rho_poly_composite(t.m, &g).unwrap() as f64 + 1e-9, "m={} r={}", t.m, t.r);
        }
    }
}
