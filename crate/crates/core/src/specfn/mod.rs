//! Special functions attached to the fractional Dickman system.
//!
//! * [`RhoTable`] tabulates ρ_κ, the continuous solution of
//!   `u ρ'(u) + (1 - κ) ρ(u) + κ ρ(u - 1) = 0` with `ρ(u) = u^{κ-1}/Γ(κ)` on
//!   `(0, 1]`, and derives the tail integral λ_κ and its complement j_κ.
//! * [`xi_kappa`], [`big_i`] and [`SaddleParams`] give the saddle-point
//!   quantities used by the asymptotic main term [`rho_asymptotic`].
//! * [`mu_kappa`] is the decreasing solution of the adjoint equation
//!   `(u g(u))' = κ (g(u + 1) - g(u))`.
//!
//! Everything here is a pure function of its inputs; a built table is
//! immutable and can be shared across threads.

mod mu;
mod rho;
mod saddle;

pub use mu::{adjoint_identity, ein, mu_kappa, AdjointIdentity};
pub use rho::RhoTable;
pub use saddle::{big_i, h_envelope, rho_asymptotic, xi_kappa, xi_root, SaddleParams};

use crate::error::SpecFnError;

/// Euler's constant, 20 significant digits.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

/// Convolution-power parameter κ > 0.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, serde::Serialize)]
pub struct Kappa(f64);

impl Kappa {
    pub fn new(value: f64) -> Result<Self, SpecFnError> {
        if value > 0.0 && value.is_finite() {
            Ok(Kappa(value))
        } else {
            Err(SpecFnError::NonPositiveKappa(value))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// True when κ is a positive integer (ρ_κ is then piecewise smooth with
    /// polynomial one-sided behaviour at the integers).
    pub fn is_integral(self) -> bool {
        (self.0 - self.0.round()).abs() < 1e-12
    }
}

impl TryFrom<f64> for Kappa {
    type Error = SpecFnError;
    fn try_from(v: f64) -> Result<Self, Self::Error> {
        Kappa::new(v)
    }
}

/// Tolerances for quadrature, root finding and tail truncation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericConfig {
    pub quad_rel_tol: f64,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub tail_cutoff_eps: f64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            quad_rel_tol: 1e-10,
            newton_tol: 1e-13,
            newton_max_iter: 64,
            tail_cutoff_eps: 1e-14,
        }
    }
}

impl NumericConfig {
    pub fn validate(&self) -> Result<(), SpecFnError> {
        for (name, v) in [
            ("quad_rel_tol", self.quad_rel_tol),
            ("newton_tol", self.newton_tol),
            ("tail_cutoff_eps", self.tail_cutoff_eps),
        ] {
            if !(v > 0.0) {
                return Err(SpecFnError::Domain {
                    name,
                    value: v,
                    expected: "> 0",
                });
            }
        }
        if self.newton_max_iter == 0 {
            return Err(SpecFnError::Domain {
                name: "newton_max_iter",
                value: 0.0,
                expected: ">= 1",
            });
        }
        Ok(())
    }
}

/// Γ(x) for x > 0.
pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

/// log Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// j_κ(u) = 1 - λ_κ(u) on `[0, 1]`, where it has the closed form
/// `e^{-γκ} u^κ / Γ(κ + 1)`.
pub fn j_kappa_closed_form(u: f64, kappa: Kappa) -> f64 {
    let k = kappa.get();
    (-EULER_GAMMA * k).exp() * u.powf(k) / gamma(k + 1.0)
}
