//! Friable (smooth-number) weighted sums, the fractional Dickman special
//! functions that describe them, and the Selberg upper-bound sieve with
//! prime-power residue classes.
//!
//! The crate is split into three layers:
//!
//! * [`specfn`]: ρ_κ, λ_κ, j_κ, μ_κ and the saddle-point quantities.
//! * [`arith`]: primes, friable enumeration, multiplicative functions,
//!   the sums ψ_f, Ψ_f, F(1, y), exact functional-equation checks, the
//!   Rankin bound and error envelopes.
//! * [`sieve`]: residue systems, optimal Selberg weights, the sieve bound
//!   with exact remainders and the polynomial application.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod error;
pub mod numeric;
pub mod sieve;
pub mod specfn;

pub use error::{ArithError, Error, SieveError, SpecFnError};
pub use specfn::{Kappa, NumericConfig, RhoTable};
