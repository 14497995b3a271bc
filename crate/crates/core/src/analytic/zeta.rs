//! Riemann and Hurwitz zeta on real arguments by Euler-Maclaurin summation.

use crate::error::{Error, Result};

/// `B_{2k} / (2k)!` for `k = 1..=20`.
const BERNOULLI_OVER_FACTORIAL: [f64; 20] = [
    0.08333333333333333,
    -0.001388888888888889,
    3.306878306878307e-05,
    -8.267195767195768e-07,
    2.08767569878681e-08,
    -5.284190138687493e-10,
    1.3382536530684679e-11,
    -3.3896802963225827e-13,
    8.586062056277845e-15,
    -2.174868698558062e-16,
    5.5090028283602295e-18,
    -1.3954464685812522e-19,
    3.534707039629467e-21,
    -8.953517427037546e-23,
    2.267952452337683e-24,
    -5.744790668872202e-26,
    1.455172475614865e-27,
    -3.6859949406653103e-29,
    9.336734257095045e-31,
    -2.36502241570063e-32,
];

/// Summation cutoff and number of Bernoulli corrections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EulerMaclaurin {
    pub terms: u32,
    pub corrections: usize,
}

impl EulerMaclaurin {
    /// Order used by [`zeta_real`] and the L-function evaluator.
    pub const STANDARD: Self = Self { terms: 12, corrections: 8 };
    /// Twice the summation length and twice the correction order.
    pub const DOUBLED: Self = Self { terms: 24, corrections: 16 };

    /// `ζ(s, α) − 1/(s − 1)`, finite at `s = 1`. Requires `α > 0`.
    pub fn hurwitz_regularized(&self, s: f64, alpha: f64) -> f64 {
        debug_assert!(alpha > 0.0);
        debug_assert!(self.corrections <= BERNOULLI_OVER_FACTORIAL.len());
        let mut head = crate::sum::CompensatedSum::new();
        for n in 0..self.terms {
            head += (n as f64 + alpha).powf(-s);
        }
        let w = self.terms as f64 + alpha;
        let lw = w.ln();
        // ((w^{1-s} − 1)/(s − 1)) written through expm1 so that s = 1 is regular.
        let t = (1.0 - s) * lw;
        let integral = if t == 0.0 { -lw } else { -lw * t.exp_m1() / t };
        head += integral;
        let w_neg_s = (-s * lw).exp();
        head += 0.5 * w_neg_s;
        let inv_w2 = 1.0 / (w * w);
        let mut power = w_neg_s / w; // w^{-s-1}
        let mut pochhammer = s; // s (s+1) ... (s+2k-2)
        for (k, coeff) in BERNOULLI_OVER_FACTORIAL.iter().take(self.corrections).enumerate() {
            if k > 0 {
                let j = 2.0 * k as f64;
                pochhammer *= (s + j - 1.0) * (s + j);
                power *= inv_w2;
            }
            head += coeff * pochhammer * power;
        }
        head.value()
    }

    /// `ζ(s, α)` for `s != 1`.
    pub fn hurwitz(&self, s: f64, alpha: f64) -> f64 {
        self.hurwitz_regularized(s, alpha) + 1.0 / (s - 1.0)
    }

    /// `(s − 1) ζ(s)`, analytic through `s = 1` where it equals 1.
    pub fn zeta_times_pole(&self, s: f64) -> f64 {
        1.0 + (s - 1.0) * self.hurwitz_regularized(s, 1.0)
    }
}

/// Lower end of the supported real window.
pub const ZETA_MIN_S: f64 = -1.0;
/// Upper end of the supported real window.
pub const ZETA_MAX_S: f64 = 3.0;

/// Riemann `ζ(s)` for real `s ∈ [−1, 3]`, `s ≠ 1`.
pub fn zeta_real(s: f64) -> Result<f64> {
    if s == 1.0 {
        return Err(Error::Pole);
    }
    if !(ZETA_MIN_S..=ZETA_MAX_S).contains(&s) {
        return crate::error::invalid(format!("ζ(s) only supported for s in [-1, 3], got {s}"));
    }
    Ok(EulerMaclaurin::STANDARD.hurwitz(s, 1.0))
}
