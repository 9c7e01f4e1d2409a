//! Tolerance policy for inequality certification.
//!
//! All certified comparisons in the crate go through one relative tolerance
//! so that "pass" always means the same thing. Default instances are built
//! from powers of two, where the key quantities are exact in binary and the
//! comparisons hold with zero slack; the tolerance exists for the general
//! float case.

use serde::{Deserialize, Serialize};

/// Global default relative tolerance for inequality certification.
pub const EPS_NUM: f64 = 1e-9;

/// Relative comparison tolerance. `a ≤ b` is certified as
/// `a ≤ b + eps·max(1, |a|, |b|)`: relative in the operand scale with an
/// absolute floor of `eps` near zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: EPS_NUM }
    }
}

impl Tolerance {
    pub fn new(eps: f64) -> Self {
        assert!(
            eps.is_finite() && eps >= 0.0,
            "tolerance must be finite and nonnegative"
        );
        Tolerance { eps }
    }

    fn slack(&self, a: f64, b: f64) -> f64 {
        self.eps * a.abs().max(b.abs()).max(1.0)
    }

    /// Certified `a ≤ b`.
    pub fn le(&self, a: f64, b: f64) -> bool {
        a <= b + self.slack(a, b)
    }

    /// Certified `a ≥ b`.
    pub fn ge(&self, a: f64, b: f64) -> bool {
        self.le(b, a)
    }

    /// Certified equality.
    pub fn eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.slack(a, b)
    }

    /// `a > b` beyond any tolerance slack; the negation of `le`.
    /// A violation under `gt` is a genuine counterexample, not noise.
    pub fn gt(&self, a: f64, b: f64) -> bool {
        !self.le(a, b)
    }

    /// `a < b` beyond slack.
    pub fn lt(&self, a: f64, b: f64) -> bool {
        !self.ge(a, b)
    }
}

/// Resolve the effective tolerance: the `QNORMLAB_TOL` environment variable
/// overrides the supplied value (CLI flag or default) when set and parseable.
pub fn resolve(flag_eps: f64) -> Tolerance {
    match std::env::var("QNORMLAB_TOL") {
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(v) if v.is_finite() && v >= 0.0 => Tolerance::new(v),
            _ => Tolerance::new(flag_eps),
        },
        Err(_) => Tolerance::new(flag_eps),
    }
}
