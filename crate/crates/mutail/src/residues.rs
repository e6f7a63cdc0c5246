//! Residue expansion of the contour integral over its right-half-plane
//! poles: z = s + n (Gamma(s-z) poles, colliding with trivial zeta zeros at
//! even n, where they become double poles) and z = s - rho for each
//! nontrivial zero rho.
//!
//! Per-pole contributions are computed by trapezoidal quadrature on a small
//! circle, which is exponentially convergent for analytic integrands and
//! order-agnostic, so double poles and their implicit log x dependence come
//! out correctly without case analysis. Shifting the contour rightward
//! walks the poles clockwise; the single global [`ORIENTATION_SIGN`] that
//! accounts for this was calibrated once against the direct sum at
//! (s, x) = (2.5, 100) and is frozen here (a test re-derives it).

use crate::mellin::integrand;
use crate::special::{gamma, pochhammer, zeta, zeta_derivative};
use crate::sum::ComplexKahan;
use crate::{real, Complex, Error, Result};
use std::path::Path;

/// Global orientation factor applied to every pole contribution when they
/// are summed into the asymptotic approximation (clockwise traversal of the
/// right-half poles).
pub const ORIENTATION_SIGN: f64 = -1.0;

/// Zeros used in a computation must pass |zeta(1/2 + i gamma)| below this.
pub const ZERO_CHECK_TOLERANCE: f64 = 1e-5;

/// Default node count for circle quadrature.
pub const DEFAULT_CIRCLE_NODES: usize = 64;

/// Default circle radius cap.
pub const DEFAULT_CIRCLE_RADIUS: f64 = 0.25;

const BUNDLED_ZEROS: &str = include_str!("../data/zeta_zeros_first100.txt");

/// Ordered positive ordinates gamma_k of nontrivial zeros
/// rho_k = 1/2 + i gamma_k.
#[derive(Debug, Clone)]
pub struct ZeroTable {
    ordinates: Vec<f64>,
    source: String,
}

impl ZeroTable {
    /// Parse a table: UTF-8 text, one positive decimal ordinate per line,
    /// '#'-prefixed comments, strictly ascending.
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut ordinates = Vec::new();
        let mut prev = 0.0f64;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let value: f64 = line.parse().map_err(|e| Error::ZeroTableParse {
                path: source.to_string(),
                line: idx + 1,
                msg: format!("{e}"),
            })?;
            if !(value > prev) || !value.is_finite() {
                return Err(Error::ZeroTableOrder {
                    path: source.to_string(),
                    line: idx + 1,
                });
            }
            ordinates.push(value);
            prev = value;
        }
        Ok(Self {
            ordinates,
            source: source.to_string(),
        })
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        Self::parse(&text, &path.as_ref().display().to_string())
    }

    /// The table shipped with the crate: ordinates of the first 100 zeros.
    pub fn bundled() -> Self {
        static TABLE: std::sync::OnceLock<ZeroTable> = std::sync::OnceLock::new();
        TABLE
            .get_or_init(|| Self::parse(BUNDLED_ZEROS, "bundled").expect("bundled zero table"))
            .clone()
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    /// rho_k = 1/2 + i gamma_k (k is zero-based).
    pub fn zero(&self, k: usize) -> Complex {
        Complex::new(0.5, self.ordinates[k])
    }

    /// Cross-check the first `count` ordinates against the zeta evaluator:
    /// each must satisfy |zeta(1/2 + i gamma)| < ZERO_CHECK_TOLERANCE.
    pub fn check_against_zeta(&self, count: usize) -> Result<()> {
        if count > self.len() {
            return Err(Error::NotEnoughZeros {
                requested: count,
                available: self.len(),
            });
        }
        for &g in &self.ordinates[..count] {
            let value = zeta(Complex::new(0.5, g))?.norm();
            if value >= ZERO_CHECK_TOLERANCE {
                return Err(Error::ZeroTableMismatch {
                    gamma: g,
                    value,
                    tol: ZERO_CHECK_TOLERANCE,
                });
            }
        }
        Ok(())
    }
}

/// One term of the residue expansion: value = coefficient * x^exponent
/// (+ log_coefficient * ln x * x^exponent when log_degree = 1).
#[derive(Debug, Clone, Copy)]
pub struct ResidueTerm {
    pub pole: Complex,
    /// x-exponent of the term: -s - n at z = s + n, rho - s at z = s - rho.
    pub exponent: Complex,
    pub coefficient: Complex,
    pub log_coefficient: Complex,
    pub log_degree: u32,
    /// The contribution at the x this term was extracted at.
    pub value: Complex,
}

// Distance from z0 to the nearest *other* singularity of the integrand:
// Gamma(z) poles at -m, Gamma(s-z) poles at s+m, zero poles s +- rho.
fn nearest_other_singularity(z0: Complex, s: Complex, table: &ZeroTable) -> f64 {
    let mut best = f64::INFINITY;
    let mut consider = |w: Complex| {
        let d = (w - z0).norm();
        if d > 1e-9 && d < best {
            best = d;
        }
    };
    for m in 0..=64 {
        consider(real(-(m as f64)));
        consider(s + m as f64);
    }
    for k in 0..table.len() {
        let rho = table.zero(k);
        consider(s - rho);
        consider(s - rho.conj());
    }
    best
}

/// Radius for a circle around z0: capped at 0.25 and at half the distance
/// to the nearest other singularity.
pub fn default_radius(z0: Complex, s: Complex, table: &ZeroTable) -> f64 {
    DEFAULT_CIRCLE_RADIUS.min(0.5 * nearest_other_singularity(z0, s, table))
}

/// (1/2 pi i) times the counterclockwise circle integral of the contour
/// integrand around z0 — the sum of residues enclosed by the circle.
///
/// Trapezoidal quadrature on `nodes` equispaced points; for an analytic
/// integrand on the circle this converges geometrically in the node count.
pub fn pole_contribution(
    s: Complex,
    x: f64,
    z0: Complex,
    radius: f64,
    nodes: usize,
) -> Result<Complex> {
    assert!(x > 0.0 && radius > 0.0 && nodes >= 8);
    let gap = nearest_other_singularity(z0, s, &ZeroTable::bundled());
    if gap < 2.0 * radius {
        return Err(Error::EnclosureAmbiguous {
            center: z0,
            radius,
            gap,
        });
    }
    let mut acc = ComplexKahan::new();
    for j in 0..nodes {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
        let e = Complex::new(theta.cos(), theta.sin());
        let z = z0 + radius * e;
        acc.add(integrand(z, s, x)? * (radius * e));
    }
    Ok(acc.value() / nodes as f64)
}

/// Closed-form residue at the simple pole z = s + n, defined only where
/// zeta(-n) != 0 (n = 0 or n odd): -(-1)^n (s)_n x^(-s-n) / (n! zeta(-n)).
pub fn analytic_n_pole_residue(s: Complex, x: f64, n: u32) -> Result<Complex> {
    assert!(
        n == 0 || n % 2 == 1,
        "even n >= 2 sits on a trivial zero: the pole is double, no simple closed form"
    );
    let zeta_neg_n = zeta(real(-(n as f64)))?;
    let mut n_fact = 1.0;
    for j in 1..=n {
        n_fact *= j as f64;
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let value =
        -sign * pochhammer(s, n)? * ((-s - n as f64) * x.ln()).exp() / (n_fact * zeta_neg_n);
    Ok(value)
}

/// Closed-form residue at the simple pole z = s - rho for a simple zero
/// rho = 1/2 + i gamma: -Gamma(rho) Gamma(s - rho) x^(rho - s)
/// / (Gamma(s) zeta'(rho)).
pub fn analytic_zero_residue(s: Complex, x: f64, gamma_ordinate: f64) -> Result<Complex> {
    let rho = Complex::new(0.5, gamma_ordinate);
    let value = -gamma(rho)? * gamma(s - rho)? / (gamma(s)? * zeta_derivative(rho)?)
        * ((rho - s) * x.ln()).exp();
    Ok(value)
}

/// Classify the pole at z0 from contributions at two x values: for a term
/// c(x) = x^(-z0) (a + b ln x), evaluating at x and e*x separates a and b.
/// log_degree is 1 when the log part is non-negligible against a.
pub fn residue_term(
    s: Complex,
    x: f64,
    z0: Complex,
    radius: f64,
    nodes: usize,
) -> Result<ResidueTerm> {
    let v1 = pole_contribution(s, x, z0, radius, nodes)?;
    let x2 = x * std::f64::consts::E;
    let v2 = pole_contribution(s, x2, z0, radius, nodes)?;
    let p1 = v1 * (z0 * x.ln()).exp();
    let p2 = v2 * (z0 * x2.ln()).exp();
    let b = p2 - p1; // ln x2 - ln x1 = 1
    let a = p1 - b * x.ln();
    let log_degree = u32::from(b.norm() > 1e-6 * a.norm().max(1e-300));
    Ok(ResidueTerm {
        pole: z0,
        exponent: -z0,
        coefficient: a,
        log_coefficient: b,
        log_degree,
        value: v1,
    })
}

/// Sum of the n-pole contributions for n = 0..=n_max (raw residues, no
/// orientation applied).
pub fn n_pole_sum(s: Complex, x: f64, n_max: u32, table: &ZeroTable) -> Result<Complex> {
    let mut acc = ComplexKahan::new();
    for n in 0..=n_max {
        let z0 = s + n as f64;
        let radius = default_radius(z0, s, table);
        acc.add(pole_contribution(s, x, z0, radius, DEFAULT_CIRCLE_NODES)?);
    }
    Ok(acc.value())
}

/// Sum of the zero-pole contributions for the first `pairs` zeros, taken in
/// conjugate pairs in increasing |gamma| order (raw residues).
///
/// The zeros consumed are cross-checked against the zeta evaluator first.
pub fn zero_pole_sum(s: Complex, x: f64, pairs: usize, table: &ZeroTable) -> Result<Complex> {
    table.check_against_zeta(pairs)?;
    let mut acc = ComplexKahan::new();
    for k in 0..pairs {
        let rho = table.zero(k);
        for z0 in [s - rho, s - rho.conj()] {
            let radius = default_radius(z0, s, table);
            acc.add(pole_contribution(s, x, z0, radius, DEFAULT_CIRCLE_NODES)?);
        }
    }
    Ok(acc.value())
}

/// The residue approximation to the Moebius tail: oriented sum over the
/// n-poles (n <= n_max) and the first `zero_pairs` conjugate zero pairs.
pub fn asymptotic_sum(
    s: Complex,
    x: f64,
    n_max: u32,
    zero_pairs: usize,
    table: &ZeroTable,
) -> Result<Complex> {
    if s.re <= 1.0 {
        return Err(Error::NotAbsolutelyConvergent { sigma: s.re });
    }
    let n_part = n_pole_sum(s, x, n_max, table)?;
    let zero_part = zero_pole_sum(s, x, zero_pairs, table)?;
    Ok(ORIENTATION_SIGN * (n_part + zero_part))
}

/// Per-term breakdown of [`asymptotic_sum`], with the orientation sign
/// already applied so the term values add up to the asymptotic sum.
pub fn asymptotic_terms(
    s: Complex,
    x: f64,
    n_max: u32,
    zero_pairs: usize,
    table: &ZeroTable,
) -> Result<Vec<ResidueTerm>> {
    if s.re <= 1.0 {
        return Err(Error::NotAbsolutelyConvergent { sigma: s.re });
    }
    table.check_against_zeta(zero_pairs)?;
    let mut poles = Vec::new();
    for n in 0..=n_max {
        poles.push(s + n as f64);
    }
    for k in 0..zero_pairs {
        let rho = table.zero(k);
        poles.push(s - rho);
        poles.push(s - rho.conj());
    }
    let mut terms = Vec::with_capacity(poles.len());
    for z0 in poles {
        let radius = default_radius(z0, s, table);
        let mut term = residue_term(s, x, z0, radius, DEFAULT_CIRCLE_NODES)?;
        term.coefficient *= ORIENTATION_SIGN;
        term.log_coefficient *= ORIENTATION_SIGN;
        term.value *= ORIENTATION_SIGN;
        terms.push(term);
    }
    Ok(terms)
}
