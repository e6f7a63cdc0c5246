//! Crate-wide error type.

use crate::Complex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("gamma pole: z = {z} is a nonpositive integer")]
    GammaPole { z: Complex },

    #[error("zeta pole at s = 1")]
    ZetaPole,

    #[error("|Im s| = {tau} exceeds the Euler-Maclaurin validity bound {limit}")]
    AccuracyLoss { tau: f64, limit: f64 },

    #[error("overflow in {op}")]
    Overflow { op: &'static str },

    #[error("series requires Re s > 1 for absolute convergence, got sigma = {sigma}")]
    NotAbsolutelyConvergent { sigma: f64 },

    #[error("kernel is not positive and decreasing at t = {t}")]
    KernelNotDecreasing { t: f64 },

    #[error("kernel must be real-valued for alternating sums, got s = {s}")]
    KernelNotReal { s: Complex },

    #[error("sieve capacity exceeded: need n <= {requested}, capacity is {capacity}")]
    SieveCapacity { requested: u64, capacity: u64 },

    #[error(
        "no cutoff N <= {capacity} meets tolerance {tolerance:.3e} \
         (modeled bound at capacity: {best:.3e})"
    )]
    ToleranceUnreachable {
        tolerance: f64,
        capacity: u64,
        best: f64,
    },

    #[error("truncation plan invalid: modeled tail bound {bound:.3e} exceeds target {target:.3e}")]
    PlanInfeasible { bound: f64, target: f64 },

    #[error("power series domain is 0 <= x < 1, got x = {x}")]
    PowerSeriesDomain { x: f64 },

    #[error("{what} did not converge within budget ({budget} refinements)")]
    QuadratureBudget { what: &'static str, budget: usize },

    #[error("contour abscissa c = {c} outside the admissible strip (0, {max})")]
    ContourDomain { c: f64, max: f64 },

    #[error("evaluation point {z} within guard radius {guard:.3e} of singularity at {pole}")]
    NearSingularity { z: Complex, pole: Complex, guard: f64 },

    #[error(
        "circle of radius {radius} around {center} cannot isolate one pole: \
         nearest other singularity is {gap:.3e} away"
    )]
    EnclosureAmbiguous {
        center: Complex,
        radius: f64,
        gap: f64,
    },

    #[error("{path}:{line}: cannot parse zero ordinate: {msg}")]
    ZeroTableParse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("{path}:{line}: ordinates must be positive and strictly increasing")]
    ZeroTableOrder { path: String, line: usize },

    #[error(
        "zero table entry gamma = {gamma} fails the zeta cross-check: \
         |zeta(1/2 + i gamma)| = {value:.3e} >= {tol:.3e}"
    )]
    ZeroTableMismatch { gamma: f64, value: f64, tol: f64 },

    #[error("table holds {available} zeros, {requested} zero pairs requested")]
    NotEnoughZeros { requested: usize, available: usize },

    #[error(
        "fit needs >= {needed_points} admitted points spanning >= {needed_decades} decades, \
         got {points} over {decades:.2}"
    )]
    InsufficientSpan {
        needed_points: usize,
        needed_decades: f64,
        points: usize,
        decades: f64,
    },

    #[error("degenerate fit: every sample magnitude is below its noise floor")]
    DegenerateFit,

    #[error("sample series invalid: {msg}")]
    BadSampleSeries { msg: String },

    #[error("{msg}")]
    Invalid { msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of an iterative numeric process (as opposed to
    /// domain or validation errors). The CLI maps these to a distinct
    /// exit code.
    pub fn is_nonconvergence(&self) -> bool {
        matches!(
            self,
            Error::QuadratureBudget { .. } | Error::ToleranceUnreachable { .. }
        )
    }
}
