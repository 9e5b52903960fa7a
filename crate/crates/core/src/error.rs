use thiserror::Error;

/// Failures of the special-function layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecFnError {
    #[error("kappa must be positive, got {0}")]
    NonPositiveKappa(f64),
    #[error("argument {name} = {value} outside the domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("root solver did not converge after {iterations} iterations (t = {t})")]
    NoConvergence { t: f64, iterations: usize },
    #[error("mesh step {step} is invalid: {reason}")]
    BadMesh { step: f64, reason: &'static str },
    #[error("u = {u} exceeds the usable range of the table (u_max = {u_max})")]
    OutOfRange { u: f64, u_max: f64 },
    #[error("tail beyond u_max ({tail:e}) exceeds the tolerance relative to {value:e}")]
    TailTooLarge { tail: f64, value: f64 },
    #[error("quadrature failed to reach tolerance (error estimate {0:e})")]
    Quadrature(f64),
}

/// Failures of the arithmetic layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArithError {
    #[error("argument {name} = {value} outside the domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("enumeration budget of {budget} elements exceeded")]
    BudgetExceeded { budget: usize },
    #[error("prime table limit {0} exceeds the memory budget")]
    PrimeLimit(u64),
    #[error("local factor at p = {p} does not converge (ratio {ratio})")]
    DivergentLocalFactor { p: u64, ratio: f64 },
    #[error("sigma = {sigma} is below 1 - eta = {floor} for a spec with prime-power support")]
    RankinDomain { sigma: f64, floor: f64 },
    #[error("exact verification needs a squarefree-supported spec")]
    NotSquarefree,
    #[error("N_y = prod p<=y does not fit the enumeration range (y = {0})")]
    PrimorialTooLarge(f64),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    SpecFn(#[from] SpecFnError),
}

/// Failures of the sieve layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SieveError {
    #[error("theta({p}^{nu}) = {value} is not positive: sum of w(p^nu)/p^nu must stay below 1")]
    ThetaNotPositive { p: u64, nu: u32, value: f64 },
    #[error("residue classes for {p}^{mu} and {p}^{nu} overlap")]
    Overlap { p: u64, mu: u32, nu: u32 },
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("no admissible m for the Selberg weights (degenerate density)")]
    EmptyDenominator,
    #[error("missing supplied remainder r_{0}")]
    MissingRemainder(u64),
    #[error("sequence of {len} elements exceeds the budget {budget}")]
    BudgetExceeded { len: usize, budget: usize },
    #[error("polynomial vanishes identically modulo {modulus}")]
    PolyVanishes { modulus: u64 },
    #[error("modulus {0} is out of range for root counting")]
    ModulusTooLarge(u64),
    #[error("singular Hensel lifting exceeded {0} nodes")]
    LiftDepth(usize),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    SpecFn(#[from] SpecFnError),
}

/// Umbrella error for callers that drive several modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    SpecFn(#[from] SpecFnError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Sieve(#[from] SieveError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
