use crate::error::{invalid, Result};

/// The triple `(x, N, a)` defining one first moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentParams {
    x: f64,
    n: f64,
    a: i64,
}

impl MomentParams {
    /// Validates `x ≥ 2`, `N ≥ 1`, `a ≠ 0` and `|a| ≤ x`.
    ///
    /// `N > x` is accepted and gives an empty range of moduli.
    pub fn new(x: f64, n: f64, a: i64) -> Result<Self> {
        if !(x >= 2.0) || !x.is_finite() {
            return invalid(format!("x must be a finite real >= 2, got {x}"));
        }
        if !(n >= 1.0) || !n.is_finite() {
            return invalid(format!("N must be a finite real >= 1, got {n}"));
        }
        if a == 0 {
            return invalid("residue class a must be nonzero");
        }
        if a.unsigned_abs() as f64 > x {
            return invalid(format!("|a| = {} exceeds x = {x}", a.unsigned_abs()));
        }
        Ok(Self { x, n, a })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    /// `⌊x⌋`, the largest integer summed over.
    pub fn x_floor(&self) -> u64 {
        self.x.floor() as u64
    }

    /// `⌊x/N⌋`, the largest modulus.
    pub fn q_max(&self) -> u64 {
        (self.x / self.n).floor() as u64
    }

    /// `(φ(|a|)/|a|) · x/N`.
    pub fn normalizer(&self) -> Result<f64> {
        let abs_a = self.a.unsigned_abs();
        let ratio = crate::sieve::euler_phi(abs_a)? as f64 / abs_a as f64;
        Ok(ratio * self.x / self.n)
    }
}
