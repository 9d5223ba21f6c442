#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;


use crate::{Error, Result};

/// Piecewise cubic Hermite interpolant with Fritsch-Carlson slopes, which
/// preserves monotonicity of the data between knots.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    slope: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(Error::Invalid {
                what: "interpolation grid",
                reason: "needs at least two knots and matching lengths",
            });
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Invalid {
                what: "interpolation grid",
                reason: "knots and values must be finite",
            });
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Invalid {
                what: "interpolation grid",
                reason: "knots must be strictly increasing",
            });
        }
        let n = x.len();
        let secant: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i])).collect();
        let mut slope = alloc::vec![0.0; n];
        slope[0] = secant[0];
        slope[n - 1] = secant[n - 2];
        for i in 1..n - 1 {
            slope[i] = if secant[i - 1] * secant[i] <= 0.0 {
                0.0
            } else {
                0.5 * (secant[i - 1] + secant[i])
            };
        }
        for i in 0..n - 1 {
            if secant[i] == 0.0 {
                slope[i] = 0.0;
                slope[i + 1] = 0.0;
                continue;
            }
            let a = slope[i] / secant[i];
            let b = slope[i + 1] / secant[i];
            let r = a * a + b * b;
            if r > 9.0 {
                let t = 3.0 / r.sqrt();
                slope[i] = t * a * secant[i];
                slope[i + 1] = t * b * secant[i];
            }
        }
        Ok(Self { x, y, slope })
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    /// Value and derivative; zero outside the knot range.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let n = self.x.len();
        if t < self.x[0] || t > self.x[n - 1] {
            return (0.0, 0.0);
        }
        let i = match self.x.binary_search_by(|v| v.total_cmp(&t)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (m0, m1) = (self.slope[i] * h, self.slope[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let value = (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * m0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * m1;
        let dvalue = ((6.0 * s2 - 6.0 * s) * y0
            + (3.0 * s2 - 4.0 * s + 1.0) * m0
            + (-6.0 * s2 + 6.0 * s) * y1
            + (3.0 * s2 - 2.0 * s) * m1)
            / h;
        (value, dvalue)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_knots_and_stays_monotone() {
        let x = alloc::vec![0.0, 1.0, 2.0, 3.0, 4.0];
        let y = alloc::vec![0.0, 0.1, 0.9, 1.0, 1.0];
        let p = MonotoneCubic::new(x.clone(), y.clone()).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert!((p.eval(*xi).0 - yi).abs() < 1e-15);
        }
        let mut prev = -1.0;
        for i in 0..=400 {
            let v = p.eval(i as f64 * 0.01).0;
            assert!(v >= prev - 1e-15);
            prev = v;
        }
    }

    #[test]
    fn exact_on_linear_data() {
        let x: Vec<f64> = (0..6).map(|i| i as f64 * 0.5).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v - 1.0).collect();
        let p = MonotoneCubic::new(x, y).unwrap();
        let (v, d) = p.eval(1.37);
        assert!((v - (3.0 * 1.37 - 1.0)).abs() < 1e-13);
        assert!((d - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_unsorted_knots() {
        assert!(MonotoneCubic::new(alloc::vec![0.0, 2.0, 1.0], alloc::vec![0.0; 3]).is_err());
    }
}
