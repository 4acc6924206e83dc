//! Exact Clopper-Pearson intervals via the regularized incomplete beta
//! function.

use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;

pub const CONFIDENCE: f64 = 0.99;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    pub trials: u64,
    pub failures: u64,
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl ErrorEstimate {
    pub fn new(failures: u64, trials: u64) -> Self {
        assert!(trials >= 1 && failures <= trials);
        let (ci_lo, ci_hi) = clopper_pearson(failures, trials, CONFIDENCE);
        ErrorEstimate {
            trials,
            failures,
            estimate: failures as f64 / trials as f64,
            ci_lo,
            ci_hi,
        }
    }
}

/// Solves beta_reg(a, b, p) = target for p by bisection (beta_reg is
/// increasing in p).
fn beta_quantile(a: f64, b: f64, target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if beta_reg(a, b, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi.max(1e-300) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Two-sided interval at the given confidence: the lower end solves
/// P(X >= x; p) = (1-c)/2 and the upper end P(X <= x; p) = (1-c)/2.
pub fn clopper_pearson(x: u64, n: u64, confidence: f64) -> (f64, f64) {
    let tail = (1.0 - confidence) / 2.0;
    let (xf, nf) = (x as f64, n as f64);
    let lo = if x == 0 { 0.0 } else { beta_quantile(xf, nf - xf + 1.0, tail) };
    let hi = if x == n { 1.0 } else { beta_quantile(xf + 1.0, nf - xf, 1.0 - tail) };
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_failures_upper_end() {
        let (lo, hi) = clopper_pearson(0, 100_000, 0.99);
        assert_eq!(lo, 0.0);
        let exact = 1.0 - 0.005f64.powf(1e-5);
        assert!((hi - exact).abs() < 1e-9 * exact.max(1e-12) + 1e-12);
        assert!((hi - 5.3e-5).abs() < 1e-6);
    }
}
