//! Prime-power Selberg sieve.
//!
//! A [`SieveInstance`] sifts a finite sequence A by disjoint residue classes
//! W(p^ν). [`sieve_bound`] evaluates the upper bound
//! `X/ψ_f(D, z) + Σ_{m<=D²} 3^{ω(m)} |r_m|` with exact remainders, together
//! with the true sifted count. [`corollary_4_3_driver`] specializes to
//! integers n in an interval for which no p^ν ∥ q divides G(n).

mod bound;
mod corollary;
mod density;
mod instance;
mod poly;
mod residue;
mod weights;

pub use bound::{
    brute_count, lambda_star, main_term, remainder_bound, remainder_terms, sieve_bound,
    sieve_bound_with, BoundOptions, RemainderTerm, SieveReport,
};
pub use corollary::{corollary_4_3_driver, envelope_cor_4_2, CorollaryReport, EnvelopeCor42};
pub use density::DensityFunction;
pub use instance::{RemainderMode, Sequence, SieveInstance};
pub use poly::{
    count_roots, count_roots_brute, count_roots_hensel, rho_poly, rho_poly_composite, Poly,
    BRUTE_CAP, MAX_LIFT_NODES, MAX_MODULUS,
};
pub use residue::ResidueSystem;
pub use weights::{epsilon, SelbergWeights, Weight};
