//! Inverse Mellin transform of the Moebius tail along a vertical contour.
//!
//! For sigma > 1 and 0 < c < sigma - 1,
//!
//! ```text
//!   M(x, s) = (1/2 pi i) int_{c - i inf}^{c + i inf}
//!             Gamma(z) Gamma(s-z) / (Gamma(s) zeta(s-z)) x^(-z) dz.
//! ```
//!
//! On the contour Re(s - z) > 1, so 1/zeta stays bounded, and the integrand
//! decays like |y|^(sigma-1) e^(-pi |y|); truncation at a finite half-height
//! is cheap and certifiable from that envelope.

use crate::series::{Estimate, ErrorModel};
use crate::special::{gamma, zeta, POLE_TOLERANCE};
use crate::{quad, Complex, Error, Result};

/// Vertical contour Re z = abscissa, |Im z| <= half_height, split into
/// `panels` Gauss-Legendre panels before adaptive refinement.
#[derive(Debug, Clone, Copy)]
pub struct ContourSpec {
    pub abscissa: f64,
    pub half_height: f64,
    pub panels: usize,
}

impl ContourSpec {
    /// Validate 0 < c < sigma - 1.
    pub fn validate(&self, s: Complex) -> Result<()> {
        let max = s.re - 1.0;
        if !(self.abscissa > 0.0 && self.abscissa < max) {
            return Err(Error::ContourDomain {
                c: self.abscissa,
                max,
            });
        }
        Ok(())
    }

    /// Default contour for given parameters: abscissa centered away from
    /// both pole lines, half-height from the integrand envelope
    /// 2 pi |y|^(sigma-1) e^(-pi |y|) < tolerance/10, floored at 30.
    pub fn for_params(s: Complex, tolerance: f64) -> Result<Self> {
        if s.re <= 1.0 + 2.0 * POLE_TOLERANCE {
            return Err(Error::ContourDomain {
                c: 0.0,
                max: s.re - 1.0,
            });
        }
        let abscissa = (0.5_f64).min(0.5 * (s.re - 1.0));
        let sigma = s.re;
        let envelope = |y: f64| {
            2.0 * std::f64::consts::PI * y.powf(sigma - 1.0) * (-std::f64::consts::PI * y).exp()
        };
        let mut y = 30.0_f64;
        while envelope(y) > tolerance / 10.0 && y < 500.0 {
            y += 1.0;
        }
        Ok(Self {
            abscissa,
            half_height: y,
            panels: (y / 2.0).ceil() as usize,
        })
    }
}

/// The contour integrand Gamma(z) Gamma(s-z) / (Gamma(s) zeta(s-z)) x^(-z),
/// with x^(-z) on the principal branch.
///
/// Refuses evaluation within a guard radius of a pole of either Gamma
/// factor; on an admissible contour Re(s - z) > 1 keeps zeta(s - z) away
/// from its zeros.
pub fn integrand(z: Complex, s: Complex, x: f64) -> Result<Complex> {
    const GUARD: f64 = 1e-8;
    let near_pole =
        |w: Complex| -> bool { w.im.abs() < GUARD && w.re < 0.5 && (w.re - w.re.round()).abs() < GUARD };
    if near_pole(z) {
        return Err(Error::NearSingularity {
            z,
            pole: Complex::new(z.re.round(), 0.0),
            guard: GUARD,
        });
    }
    if near_pole(s - z) {
        return Err(Error::NearSingularity {
            z,
            pole: s - Complex::new((s - z).re.round(), 0.0),
            guard: GUARD,
        });
    }
    let num = gamma(z)? * gamma(s - z)?;
    let den = gamma(s)? * zeta(s - z)?;
    Ok(num / den * (-z * x.ln()).exp())
}

/// Gauss-Legendre evaluation of the truncated vertical-line integral with
/// adaptive panel splitting, plus the certified envelope bound for the
/// discarded tails |Im z| > half_height.
pub fn inverse_mellin(
    s: Complex,
    x: f64,
    contour: &ContourSpec,
    tolerance: f64,
) -> Result<Estimate> {
    if s.re <= 1.0 {
        return Err(Error::NotAbsolutelyConvergent { sigma: s.re });
    }
    assert!(x > 0.0, "x must be positive");
    contour.validate(s)?;

    let c = contour.abscissa;
    let y = contour.half_height;
    // errors inside the quadrature surface as NaN and are rejected after
    // integration; on an admissible contour the integrand is analytic
    let f = |t: f64| -> Complex {
        integrand(Complex::new(c, t), s, x).unwrap_or_else(|_| Complex::new(f64::NAN, f64::NAN))
    };

    // (1/2 pi) int_{-Y}^{Y} f(c + iy) dy, panel by panel
    let n_panels = contour.panels.max(1);
    let mut total = Complex::new(0.0, 0.0);
    let mut quad_err = 0.0;
    let per_panel_tol = tolerance.max(1e-15) / (10.0 * n_panels as f64);
    for p in 0..n_panels {
        let a = -y + 2.0 * y * p as f64 / n_panels as f64;
        let b = -y + 2.0 * y * (p + 1) as f64 / n_panels as f64;
        let (v, e) = quad::adaptive(&f, a, b, per_panel_tol, "mellin contour")?;
        total += v;
        quad_err += e;
    }
    if !total.re.is_finite() || !total.im.is_finite() {
        return Err(Error::NearSingularity {
            z: Complex::new(c, 0.0),
            pole: s,
            guard: 1e-8,
        });
    }
    let value = total / (2.0 * std::f64::consts::PI);

    // truncation bound: the envelope decays like e^(-pi y), so the discarded
    // mass is at most envelope(Y)/pi times the x- and Gamma(s)-scale factors
    let sigma = s.re;
    let envelope = 2.0 * std::f64::consts::PI
        * y.powf(sigma - 1.0)
        * (-std::f64::consts::PI * y).exp()
        * x.powf(-c)
        / gamma(s)?.norm();
    let error = envelope / std::f64::consts::PI + quad_err / (2.0 * std::f64::consts::PI);

    Ok(Estimate {
        value,
        error,
        model: ErrorModel::Rigorous,
    })
}
