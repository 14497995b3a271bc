//! Bias constants and the Euler products entering the main terms.

use super::euler::{EulerEngine, EulerValue};
use crate::error::{invalid, Result};
use crate::sieve::{euler_phi, factorize, prime_divisors};

/// Euler-Mascheroni constant γ₀.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Decay exponent of the error term in the moment asymptotics. Metadata only.
pub const ERROR_EXPONENT: f64 = 171.0 / 448.0;

/// Lower end of the convergence window accepted by [`EulerEngine::big_z`].
pub const BIG_Z_MIN_S: f64 = -1.3;

/// Shape of `|a|` as far as the bias constants care.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidueShape {
    /// `a = ±1`.
    Unit,
    /// `a = ±ℓ^ν` for a prime `ℓ`.
    PrimePower(u64),
    /// `ω(a) ≥ 2`.
    Composite,
}

impl ResidueShape {
    pub fn of(a: i64) -> Result<Self> {
        if a == 0 {
            return invalid("residue class a must be nonzero");
        }
        let primes = prime_divisors(a.unsigned_abs())?;
        Ok(match primes.as_slice() {
            [] => Self::Unit,
            [p] => Self::PrimePower(*p),
            _ => Self::Composite,
        })
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn require_coprime(a: i64, q0: u64) -> Result<()> {
    if a == 0 || q0 == 0 {
        return invalid("a must be nonzero and q0 positive");
    }
    if gcd(a.unsigned_abs(), q0) != 1 {
        return invalid(format!("gcd(a, q0) = gcd({a}, {q0}) must be 1"));
    }
    Ok(())
}

fn union_primes(a: i64, q0: u64) -> Result<Vec<u64>> {
    let mut ps = prime_divisors(a.unsigned_abs())?;
    ps.extend(prime_divisors(q0)?);
    ps.sort_unstable();
    ps.dedup();
    Ok(ps)
}

/// `Σ_{p | n} log p / p`.
pub fn sum_log_p_over_p(n: u64) -> Result<f64> {
    Ok(prime_divisors(n)?.into_iter().map(|p| (p as f64).ln() / p as f64).sum())
}

/// Predicted bias terms for one residue class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasPrediction {
    pub mu: f64,
    /// Zero when no exceptional conductor is supplied.
    pub mu_tilde: f64,
    pub error_exponent: f64,
}

impl EulerEngine {
    /// `Σ_p log p / (p(p − 1))`.
    pub fn log_prime_sum(&self) -> EulerValue {
        self.prime_sum(|p, l| l / (p * (p - 1.0)), &[])
    }

    /// `C₀ = ½(log 2π + γ₀ + Σ_p log p/(p(p−1)) + 1)`.
    pub fn c0(&self) -> EulerValue {
        let s = self.log_prime_sum();
        s.shift((2.0 * std::f64::consts::PI).ln() + EULER_GAMMA + 1.0).scale(0.5)
    }

    /// `C_{a,q₀} = φ(|a|)/(|a| φ(q₀)) Π_{p∤aq₀} (1 + 1/(p(p−1)))`.
    pub fn c_aq(&self, a: i64, q0: u64) -> Result<EulerValue> {
        require_coprime(a, q0)?;
        let excluded = union_primes(a, q0)?;
        let abs_a = a.unsigned_abs();
        let prefactor = euler_phi(abs_a)? as f64 / (abs_a as f64 * euler_phi(q0)? as f64);
        let product = self.prime_product(|p, _| (1.0 / (p * (p - 1.0))).ln_1p(), &excluded);
        Ok(product.scale(prefactor))
    }

    /// `D_{a,q₀} = Σ_{p|a} log p/(p − 1) − Σ_{p∤aq₀} log p/(p² − p + 1) + γ₀`.
    ///
    /// The `p | a` sum carries `1/(p − 1)`; with `1/p` instead, the mean value
    /// of `1/φ(q)` over `(q, a) = 1` misses its constant term by
    /// `C_{a,q₀} Σ_{p|a} log p/(p(p−1))`.
    pub fn d_aq(&self, a: i64, q0: u64) -> Result<EulerValue> {
        require_coprime(a, q0)?;
        let excluded = union_primes(a, q0)?;
        let local: f64 = prime_divisors(a.unsigned_abs())?
            .into_iter()
            .map(|p| (p as f64).ln() / (p as f64 - 1.0))
            .sum();
        let tail = self.prime_sum(|p, l| l / (p * p - p + 1.0), &excluded);
        Ok(tail.scale(-1.0).shift(local + EULER_GAMMA))
    }

    /// `Z(s) = Π_p (1 + 1/(p^{s+2}(p−1)) − 1/(p^{2s+3}(p−1)))` for `s ≥ −1.3`.
    pub fn big_z(&self, s: f64) -> Result<EulerValue> {
        if !(s >= BIG_Z_MIN_S) || !s.is_finite() {
            return invalid(format!("Z(s) is only evaluated for s >= {BIG_Z_MIN_S}, got {s}"));
        }
        Ok(self.z_cached(s, || {
            self.prime_product(
                |p, l| {
                    // p^{-(s+2)} − p^{-(2s+3)} = −p^{-(s+2)} expm1(−(s+1) log p)
                    let diff = -(-(s + 2.0) * l).exp() * (-(s + 1.0) * l).exp_m1();
                    (diff / (p - 1.0)).ln_1p()
                },
                &[],
            )
        }))
    }

    /// `μ(a, N)`.
    pub fn mu(&self, a: i64, n: f64) -> Result<f64> {
        if !(n >= 1.0) {
            return invalid(format!("N must be >= 1, got {n}"));
        }
        Ok(match ResidueShape::of(a)? {
            ResidueShape::Unit => -0.5 * n.ln() - self.c0().value,
            ResidueShape::PrimePower(p) => -0.5 * (p as f64).ln(),
            ResidueShape::Composite => 0.0,
        })
    }

    pub fn bias_prediction(&self, a: i64, n: f64, q_tilde: Option<u64>) -> Result<BiasPrediction> {
        let mu_tilde = match q_tilde {
            Some(q) => mu_tilde(a, q)?,
            None => 0.0,
        };
        Ok(BiasPrediction { mu: self.mu(a, n)?, mu_tilde, error_exponent: ERROR_EXPONENT })
    }
}

/// `G_{q₀,a}(s) = Π_{p|aq₀} (1 + 1/(p^{s+1}(p−1)))^{-1} Π_{p|a} (1 − 1/p^{s+1})`.
pub fn big_g(q0: u64, a: i64, s: f64) -> Result<f64> {
    if q0 == 0 || a == 0 {
        return invalid("G requires q0 >= 1 and a != 0");
    }
    let mut value = 1.0;
    for p in union_primes(a, q0)? {
        let pf = p as f64;
        value /= 1.0 + pf.powf(-(s + 1.0)) / (pf - 1.0);
    }
    for p in prime_divisors(a.unsigned_abs())? {
        value *= -(-(s + 1.0) * (p as f64).ln()).exp_m1();
    }
    Ok(value)
}

/// `μ̃(a) = ½ 1_{a=±1} (log q̃ − Σ_{p|q̃} log p/p)`.
pub fn mu_tilde(a: i64, q_tilde: u64) -> Result<f64> {
    if q_tilde == 0 {
        return invalid("q̃ must be positive");
    }
    if ResidueShape::of(a)? != ResidueShape::Unit {
        return Ok(0.0);
    }
    Ok(0.5 * ((q_tilde as f64).ln() - sum_log_p_over_p(q_tilde)?))
}

/// Number of distinct prime factors of `|a|`.
pub fn omega(a: i64) -> Result<usize> {
    Ok(factorize(a.unsigned_abs())?.len())
}

pub fn c0() -> EulerValue {
    EulerEngine::shared().c0()
}

pub fn c_aq(a: i64, q0: u64) -> Result<EulerValue> {
    EulerEngine::shared().c_aq(a, q0)
}

pub fn d_aq(a: i64, q0: u64) -> Result<EulerValue> {
    EulerEngine::shared().d_aq(a, q0)
}

pub fn big_z(s: f64) -> Result<EulerValue> {
    EulerEngine::shared().big_z(s)
}

pub fn mu(a: i64, n: f64) -> Result<f64> {
    EulerEngine::shared().mu(a, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn engine() -> &'static EulerEngine {
        EulerEngine::shared()
    }

    #[test]
    fn c11_is_the_zeta_ratio() {
        let zeta3 = 1.202_056_903_159_594_3;
        let closed = (PI * PI / 6.0) * zeta3 / (PI.powi(6) / 945.0);
        let c = engine().c_aq(1, 1).unwrap();
        assert!((c.value - closed).abs() < 1e-10, "{} vs {closed}", c.value);
        assert!(c.truncation_bound < 1e-10);
    }

    #[test]
    fn c_aq_local_factors() {
        let c11 = engine().c_aq(1, 1).unwrap().value;
        let c12 = engine().c_aq(1, 2).unwrap().value;
        let c21 = engine().c_aq(2, 1).unwrap().value;
        assert!((c12 - c11 / 1.5).abs() < 1e-13);
        assert!((c21 - 0.5 * c11 / 1.5).abs() < 1e-13);
        assert!((c12 - 1.2957).abs() < 1e-4);
        assert!((c21 - 0.6479).abs() < 1e-4);
        assert_eq!(engine().c_aq(-3, 1).unwrap().value, engine().c_aq(3, 1).unwrap().value);
        assert!(engine().c_aq(2, 4).is_err());
        assert!(engine().d_aq(6, 3).is_err());
    }

    #[test]
    fn c0_value_and_bound() {
        let c = engine().c0();
        let s = engine().log_prime_sum();
        assert!(c.truncation_bound <= 1e-10);
        // Mertens: Σ_p log p/(p(p−1)) = −E − γ₀ with E = −1.332582275733220881765828776071...
        assert!((s.value - (1.332_582_275_733_220_9 - EULER_GAMMA)).abs() < 1e-10);
        assert!((2.0 * c.value - 1.0 - EULER_GAMMA - (2.0 * PI).ln() - s.value).abs() < 1e-14);
        assert!((c.value - 2.085_229).abs() < 1e-6);
    }

    #[test]
    fn d_aq_relations() {
        let d11 = engine().d_aq(1, 1).unwrap();
        let d21 = engine().d_aq(2, 1).unwrap();
        let d16 = engine().d_aq(1, 6).unwrap();
        let ln2 = 2f64.ln();
        let ln3 = 3f64.ln();
        assert!((d21.value - (d11.value + ln2 + ln2 / 3.0)).abs() < 1e-13);
        assert!((d16.value - (d11.value + ln2 / 3.0 + ln3 / 7.0)).abs() < 1e-13);
        let direct = engine().prime_sum(|p, l| l / (p * p - p + 1.0), &[]);
        assert!((d11.value - (EULER_GAMMA - direct.value)).abs() < 1e-15);
        assert!(d11.truncation_bound <= 1e-10);
    }

    #[test]
    fn big_z_values() {
        let z = engine().big_z(-1.0).unwrap();
        assert_eq!(z.value, 1.0);
        assert_eq!(z.truncation_bound, 0.0);
        let z0 = engine().big_z(0.0).unwrap();
        let z09 = engine().big_z(-0.9).unwrap();
        let small = EulerEngine::new(1 << 23).unwrap();
        assert!((small.big_z(0.0).unwrap().value - z0.value).abs() <= small.big_z(0.0).unwrap().truncation_bound);
        assert!((small.big_z(-0.9).unwrap().value - z09.value).abs() < 1e-10);
        assert!(engine().big_z(-1.31).is_err());
        assert!(engine().big_z(f64::NAN).is_err());
        // s = −1.3 converges, slowly
        assert!(engine().big_z(-1.3).unwrap().value.is_finite());
    }

    #[test]
    fn big_g_values() {
        for s in [-1.0, -0.8, 0.0, 2.0] {
            assert_eq!(big_g(1, 1, s).unwrap(), 1.0);
        }
        assert_eq!(big_g(1, 6, -1.0).unwrap(), 0.0);
        assert_eq!(big_g(1, -4, -1.0).unwrap(), 0.0);
        assert!((big_g(3, 1, -1.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn mu_cases() {
        let c0 = engine().c0().value;
        assert!((engine().mu(1, 100.0).unwrap() - (-0.5 * 100f64.ln() - c0)).abs() < 1e-15);
        assert!((engine().mu(-1, 100.0).unwrap() + 4.387_814).abs() < 1e-5);
        assert!((engine().mu(9, 37.0).unwrap() + 0.5 * 3f64.ln()).abs() < 1e-15);
        assert_eq!(engine().mu(6, 10.0).unwrap(), 0.0);
        assert!(engine().mu(0, 10.0).is_err());
        assert!(engine().mu(1, 0.5).is_err());
    }

    #[test]
    fn mu_tilde_cases() {
        assert_eq!(mu_tilde(2, 5).unwrap(), 0.0);
        let ln3 = 3f64.ln();
        assert!((mu_tilde(1, 3).unwrap() - 0.5 * (ln3 - ln3 / 3.0)).abs() < 1e-15);
        assert!((mu_tilde(1, 3).unwrap() - 0.3662).abs() < 1e-4);
        let want = 0.5 * (12f64.ln() - 2f64.ln() / 2.0 - ln3 / 3.0);
        assert!((mu_tilde(-1, 12).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn bias_prediction_metadata() {
        let b = engine().bias_prediction(6, 50.0, None).unwrap();
        assert_eq!(b.mu, 0.0);
        assert_eq!(b.mu_tilde, 0.0);
        assert_eq!(b.error_exponent, 171.0 / 448.0);
    }
}
