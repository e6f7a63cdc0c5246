//! Compensated and pairwise summation.
//!
//! Billion-term sums lose ~9 digits to naive left-to-right accumulation.
//! Blocks are summed with Kahan compensation and combined by a pairwise
//! reduction whose shape depends only on the number of blocks, so results
//! are bitwise identical for any worker count.

use crate::Complex;

/// Kahan (compensated) accumulator for `f64`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let y = value - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Componentwise Kahan accumulator for complex terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexKahan {
    re: Kahan,
    im: Kahan,
}

impl ComplexKahan {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: Complex) {
        self.re.add(value.re);
        self.im.add(value.im);
    }

    #[inline]
    pub fn value(&self) -> Complex {
        Complex::new(self.re.value(), self.im.value())
    }
}

/// Pairwise reduction in fixed ascending order.
///
/// The reduction tree is a function of `parts.len()` alone, never of how the
/// parts were produced.
pub fn pairwise_sum(parts: &[Complex]) -> Complex {
    match parts.len() {
        0 => Complex::new(0.0, 0.0),
        1 => parts[0],
        2 => parts[0] + parts[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&parts[..mid]) + pairwise_sum(&parts[mid..])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_recovers_lost_bits() {
        // 1 + 1e-16 repeated: naive summation stalls at 1.0
        let mut k = Kahan::new();
        k.add(1.0);
        for _ in 0..1000 {
            k.add(1e-16);
        }
        assert!((k.value() - (1.0 + 1000.0 * 1e-16)).abs() < 1e-18);
    }

    #[test]
    fn pairwise_matches_exact_on_small_input() {
        let parts: Vec<Complex> = (1..=7).map(|i| Complex::new(i as f64, -(i as f64))).collect();
        let s = pairwise_sum(&parts);
        assert_eq!(s, Complex::new(28.0, -28.0));
    }

    #[test]
    fn pairwise_is_shape_deterministic() {
        let parts: Vec<Complex> = (0..97)
            .map(|i| Complex::new((i as f64).sin() * 1e10, (i as f64).cos() * 1e-10))
            .collect();
        let a = pairwise_sum(&parts);
        let b = pairwise_sum(&parts.clone());
        assert_eq!(a, b);
    }
}
