//! Shared fixtures for the benchmarks.

use std::collections::{BTreeMap, BTreeSet};

use friable_core::sieve::{Poly, ResidueSystem, SieveInstance};

/// G(X) = X² - 1.
pub fn x2_minus_1() -> Poly {
    Poly::new(vec![-1, 0, 1])
}

/// A = [1, n], one class modulo p and modulo p² for p <= 13, at level D.
pub fn dense_instance(n: i64, d: f64) -> SieveInstance {
    let mut entries = BTreeMap::new();
    for p in [2u64, 3, 5, 7, 11, 13] {
        entries.insert((p, 1), BTreeSet::from([0]));
        entries.insert((p, 2), BTreeSet::from([1]));
    }
    let res = ResidueSystem::new(13.0, entries).expect("disjoint classes");
    SieveInstance::explicit((1..=n).collect(), res, d).expect("valid instance")
}
