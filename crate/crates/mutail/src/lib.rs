//! Numerical laboratory for Moebius-weighted tail series
//!
//! The central object is the series
//!
//! ```text
//!     M(x, s) = sum_{n >= 1} mu(n) (n + x)^(-s)        (Re s > 1, x >= 0)
//! ```
//!
//! where `mu` is the Moebius function. The crate evaluates it by four
//! independent routes and cross-checks them against each other:
//!
//! * direct summation over segmented-sieve Moebius blocks ([`series::moebius_tail`]),
//! * the power series in `x` with `1/zeta(s+k)` coefficients, valid for
//!   `0 <= x < 1` ([`series::power_series_rhs`]),
//! * a Mellin-Barnes contour integral along a vertical line
//!   ([`mellin::inverse_mellin`]),
//! * a residue expansion over the poles of the contour integrand, including
//!   the nontrivial zeros of the zeta function ([`residues::asymptotic_sum`]).
//!
//! On top of those sit plain (unweighted) and alternating tails, a Laplace
//! integral representation of the plain tail, and a log-log envelope fit
//! ([`analysis`]) that estimates the empirical decay exponent of `|M(x, s)|`
//! and compares it with the conjectured `x^(1/2 - sigma)` envelope.

// reference constants are kept at full printed precision; the compiler
// rounds them to the nearest f64
#![allow(clippy::excessive_precision)]

pub mod analysis;
pub mod error;
pub mod mellin;
pub mod moebius;
pub mod residues;
pub mod series;
pub mod special;
pub mod sum;

pub(crate) mod quad;

pub use error::{Error, Result};

/// The numeric currency of the crate: a double-precision complex number.
pub type Complex = num_complex::Complex64;

/// Shorthand for a purely real [`Complex`].
pub fn real(x: f64) -> Complex {
    Complex::new(x, 0.0)
}
