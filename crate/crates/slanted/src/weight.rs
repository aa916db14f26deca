//! Admissible weights for slant-class norms.
//!
//! Weights are of the form w(n) = (1 + |n|)^s * exp(a |n|^b). The report
//! helpers evaluate in log space so large arguments never overflow.

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Debug)]
pub enum Weight {
    Polynomial { s: f64 },
    Exponential { a: f64, b: f64, s: f64 },
}

impl Weight {
    /// The constant weight 1.
    pub fn unit() -> Self {
        Weight::Polynomial { s: 0.0 }
    }

    pub fn polynomial(s: f64) -> Result<Self> {
        if !s.is_finite() || s < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "polynomial weight exponent must be finite and nonnegative, got {s}"
            )));
        }
        Ok(Weight::Polynomial { s })
    }

    /// Subexponential weight exp(a |n|^b) (1 + |n|)^s with 0 <= b <= 1.
    /// b = 1 is allowed but fails the growth admissibility check.
    pub fn exponential(a: f64, b: f64, s: f64) -> Result<Self> {
        if !a.is_finite() || a < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "exponential weight rate must be finite and nonnegative, got {a}"
            )));
        }
        if !b.is_finite() || !(0.0..=1.0).contains(&b) {
            return Err(Error::InvalidParameter(format!(
                "exponential weight power must lie in [0, 1], got {b}"
            )));
        }
        if !s.is_finite() || s < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "polynomial weight exponent must be finite and nonnegative, got {s}"
            )));
        }
        Ok(Weight::Exponential { a, b, s })
    }

    pub fn eval(&self, n: i64) -> f64 {
        self.log_eval(n.unsigned_abs() as f64).exp()
    }

    fn log_eval(&self, t: f64) -> f64 {
        debug_assert!(t >= 0.0);
        match *self {
            Weight::Polynomial { s } => s * (1.0 + t).ln(),
            Weight::Exponential { a, b, s } => a * t.powf(b) + s * (1.0 + t).ln(),
        }
    }

    /// Smallest C with w(m + n) <= C w(m) w(n) over |m|, |n| <= half_width.
    pub fn submultiplicative_constant(&self, half_width: i64) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for m in -half_width..=half_width {
            for n in -half_width..=half_width {
                let log_ratio = self.log_eval((m + n).unsigned_abs() as f64)
                    - self.log_eval(m.unsigned_abs() as f64)
                    - self.log_eval(n.unsigned_abs() as f64);
                worst = worst.max(log_ratio);
            }
        }
        worst.exp()
    }

    /// Growth trend w(k n)^(1/k); tends to 1 exactly when the weight is
    /// subexponential, the spectral-radius style admissibility condition.
    pub fn growth_trend(&self, n: i64, factors: &[u64]) -> Vec<(u64, f64)> {
        factors
            .iter()
            .map(|&k| {
                let t = (k as f64) * n.unsigned_abs() as f64;
                (k, (self.log_eval(t) / k as f64).exp())
            })
            .collect()
    }

    /// sup over |n| <= half_width of w(k n) / w(n).
    pub fn dilation_sup(&self, k: i64, half_width: i64) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for n in -half_width..=half_width {
            let log_ratio = self.log_eval((k * n).unsigned_abs() as f64)
                - self.log_eval(n.unsigned_abs() as f64);
            worst = worst.max(log_ratio);
        }
        worst.exp()
    }

    pub fn report(&self, half_width: i64) -> WeightReport {
        WeightReport {
            half_width,
            submultiplicative_constant: self.submultiplicative_constant(half_width),
            growth_trend: self.growth_trend(1, &[10, 100, 1000, 10000]),
            dilation_sups: [2, 3]
                .iter()
                .map(|&k| (k, self.dilation_sup(k, half_width)))
                .collect(),
        }
    }
}

/// Numerical admissibility summary for a weight on a finite window.
#[derive(Clone, Debug)]
pub struct WeightReport {
    pub half_width: i64,
    pub submultiplicative_constant: f64,
    /// (k, w(k)^(1/k)) samples; bounded iff the weight is subexponential.
    pub growth_trend: Vec<(u64, f64)>,
    /// (k, sup w(kn)/w(n)); finite per k for polynomially dominated weights.
    pub dilation_sups: Vec<(i64, f64)>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_values() {
        let w = Weight::polynomial(2.0).unwrap();
        assert_eq!(w.eval(0), 1.0);
        assert!((w.eval(3) - 16.0).abs() < 1e-12);
        assert!((w.eval(-3) - 16.0).abs() < 1e-12);
        assert_eq!(Weight::unit().eval(1_000_000), 1.0);
    }

    #[test]
    fn exponential_values() {
        let w = Weight::exponential(0.5, 0.5, 1.0).unwrap();
        let expect = (0.5 * 2.0_f64).exp() * 5.0;
        assert!((w.eval(4) - expect).abs() < 1e-12 * expect);
        assert!(Weight::exponential(-0.1, 0.5, 0.0).is_err());
        assert!(Weight::exponential(0.1, 1.5, 0.0).is_err());
    }

    #[test]
    fn submultiplicative_on_window() {
        // (1 + |m + n|) <= (1 + |m|)(1 + |n|), so C = 1 for s >= 0.
        let w = Weight::polynomial(3.0).unwrap();
        let c = w.submultiplicative_constant(30);
        assert!(c <= 1.0 + 1e-12, "C = {c}");
        let w = Weight::exponential(1.0, 0.5, 0.0).unwrap();
        let c = w.submultiplicative_constant(30);
        assert!(c <= 1.0 + 1e-12, "C = {c}");
    }

    #[test]
    fn growth_trend_separates_subexponential() {
        let poly = Weight::polynomial(5.0).unwrap();
        let trend = poly.growth_trend(1, &[10, 10000]);
        assert!(trend[1].1 < trend[0].1);
        assert!(trend[1].1 < 1.01);

        // b = 1 is genuinely exponential: trend stays at e^a.
        let exp = Weight::exponential(1.0, 1.0, 0.0).unwrap();
        let trend = exp.growth_trend(1, &[10, 10000]);
        assert!((trend[1].1 - 1.0_f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn dilation_sup_polynomial() {
        // For w = (1+|n|)^s the ratio w(2n)/w(n) tends to 2^s.
        let w = Weight::polynomial(2.0).unwrap();
        let sup = w.dilation_sup(2, 200);
        assert!(sup < 4.0 + 1e-9);
        assert!(sup > 3.9);
    }
}
