//! Gauss-Legendre panel quadrature.

use crate::{Complex, Error, Result};
use std::sync::OnceLock;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-angle initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

const PANEL_NODES: usize = 32;

fn gl32() -> &'static (Vec<f64>, Vec<f64>) {
    static TABLE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    TABLE.get_or_init(|| gauss_legendre(PANEL_NODES))
}

/// 32-node Gauss-Legendre rule applied to one panel [a, b].
pub fn panel<F>(f: &F, a: f64, b: f64) -> Complex
where
    F: Fn(f64) -> Complex,
{
    let (nodes, weights) = gl32();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = Complex::new(0.0, 0.0);
    for (x, w) in nodes.iter().zip(weights) {
        acc += *w * f(mid + half * x);
    }
    half * acc
}

/// Adaptive bisection: split a panel until the two-half refinement agrees
/// with the whole-panel value to `tol`, then keep the refined value.
/// Returns the integral and an error estimate (sum of the final refinement
/// discrepancies). Left-to-right recursion keeps accumulation deterministic.
pub fn adaptive<F>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    what: &'static str,
) -> Result<(Complex, f64)>
where
    F: Fn(f64) -> Complex,
{
    const MAX_DEPTH: usize = 28;
    fn recurse<F: Fn(f64) -> Complex>(
        f: &F,
        a: f64,
        b: f64,
        whole: Complex,
        tol: f64,
        depth: usize,
        what: &'static str,
    ) -> Result<(Complex, f64)> {
        let mid = 0.5 * (a + b);
        let left = panel(f, a, mid);
        let right = panel(f, mid, b);
        let diff = (left + right - whole).norm();
        if diff <= tol {
            return Ok((left + right, diff));
        }
        // a NaN discrepancy (singular evaluation) never satisfies the
        // acceptance test above, so it ends up here as well
        if depth >= MAX_DEPTH {
            return Err(Error::QuadratureBudget {
                what,
                budget: MAX_DEPTH,
            });
        }
        let (vl, el) = recurse(f, a, mid, left, 0.5 * tol, depth + 1, what)?;
        let (vr, er) = recurse(f, mid, b, right, 0.5 * tol, depth + 1, what)?;
        Ok((vl + vr, el + er))
    }
    let whole = panel(f, a, b);
    recurse(f, a, b, whole, tol, 0, what)
}
