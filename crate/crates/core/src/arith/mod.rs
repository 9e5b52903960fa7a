//! Multiplicative functions and their friable sums.
//!
//! * [`MultiplicativeSpec`] describes f by its prime-power values.
//! * [`psi_f`], [`big_psi_f`], [`f1y`] and [`psi_f_star`] evaluate the
//!   weighted sums over y-friable integers exactly.
//! * [`hypothesis_report`] measures the drift r_f and the ν >= 2 moments.
//! * [`rankin_bound`], [`envelopes`] and [`c_kappa`] evaluate bounds and
//!   predicted error terms.
//! * [`verify_eq_7_3`] and [`verify_eq_8_2`] check the two functional
//!   equations of friable sums term by term.

mod envelopes;
mod friable;
mod hypothesis;
mod identities;
mod primes;
mod rankin;
mod spec;
mod sums;

pub use envelopes::{c_kappa, envelopes, Envelopes};
pub use friable::{enumerate_friable, enumerate_friable_with_budget, DEFAULT_BUDGET, MAX_X};
pub use hypothesis::{hypothesis_report, r_f, z_moments, HypothesisReport, PrimeDrift};
pub use identities::{verify_eq_7_3, verify_eq_8_2, IdentityCheck};
pub use primes::{
    factorize, is_prime, largest_prime_factor, primes_up_to, PrimeTable, MAX_PRIME_LIMIT,
};
pub use rankin::{alpha_kappa, rankin_bound, rankin_bound_at};
pub use spec::{binomial_rising, parse_prime_power, MultiplicativeSpec, SpecKind};
pub use sums::{
    big_psi_f, big_psi_f_with_budget, f1y, psi_f, psi_f_star, psi_f_star_with_budget,
    psi_f_with_budget, FriableSumReport, F1Y_REL_TOL,
};
