//! Real primitive characters as Kronecker symbols, and their L-values.

use crate::analytic::zeta::EulerMaclaurin;
use crate::error::{invalid, Result};
use crate::sieve::factorize;

/// Jacobi symbol `(a|n)` for odd `n > 0`.
fn jacobi(a: i64, n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut sign = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        (a, n) = (n, a);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Kronecker symbol `(d|n)`.
pub fn kronecker(d: i64, n: i64) -> i32 {
    if n == 0 {
        return i32::from(d == 1 || d == -1);
    }
    let mut result = 1;
    if n < 0 && d < 0 {
        result = -result;
    }
    let mut m = n.unsigned_abs();
    let twos = m.trailing_zeros();
    if twos > 0 {
        if d % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 && matches!(d.rem_euclid(8), 3 | 5) {
            result = -result;
        }
        m >>= twos;
    }
    result * jacobi(d, m)
}

fn is_squarefree(n: u64) -> bool {
    factorize(n).map(|f| f.iter().all(|&(_, e)| e == 1)).unwrap_or(false)
}

/// Whether `d ≠ 1` is the discriminant of a primitive real character.
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 || d == i64::MIN {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// The character `n ↦ (d|n)` for a fundamental discriminant `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadraticCharacter {
    d: i64,
}

impl QuadraticCharacter {
    pub fn from_discriminant(d: i64) -> Result<Self> {
        if !is_fundamental(d) {
            return invalid(format!("{d} is not a fundamental discriminant"));
        }
        Ok(Self { d })
    }

    /// The unique primitive real character of conductor `q`.
    ///
    /// Conductors `8m` with odd squarefree `m` carry two such characters;
    /// those must be given by discriminant.
    pub fn from_conductor(q: u64) -> Result<Self> {
        let Ok(signed) = i64::try_from(q) else {
            return invalid(format!("conductor {q} out of range"));
        };
        let candidates: Vec<i64> = [-signed, signed].into_iter().filter(|&d| is_fundamental(d)).collect();
        match candidates.as_slice() {
            [d] => Ok(Self { d: *d }),
            [] => invalid(format!("{q} is not the conductor of a primitive real character")),
            _ => invalid(format!("conductor {q} is ambiguous: use discriminant -{q} or {q}")),
        }
    }

    pub fn discriminant(&self) -> i64 {
        self.d
    }

    pub fn conductor(&self) -> u64 {
        self.d.unsigned_abs()
    }

    pub fn chi(&self, n: i64) -> i32 {
        kronecker(self.d, n)
    }

    /// `L(s, χ_d)` for `s ∈ [1/2, 3/2]`.
    pub fn l_value(&self, s: f64) -> Result<f64> {
        if !(0.5..=1.5).contains(&s) {
            return invalid(format!("L(s, χ) is evaluated for s in [1/2, 3/2], got {s}"));
        }
        Ok(self.l_value_unchecked(s))
    }

    /// `|d|^{−s} Σ_r χ(r) ζ(s, r/|d|)`; the pole parts cancel since `Σ χ(r) = 0`.
    pub(crate) fn l_value_unchecked(&self, s: f64) -> f64 {
        let k = self.conductor();
        let kf = k as f64;
        let em = EulerMaclaurin::STANDARD;
        let mut acc = crate::sum::CompensatedSum::new();
        for r in 1..k {
            let c = self.chi(r as i64);
            if c != 0 {
                acc += f64::from(c) * em.hurwitz_regularized(s, r as f64 / kf);
            }
        }
        kf.powf(-s) * acc.value()
    }
}

/// `L(s, χ_d)`; `d` must be a fundamental discriminant.
pub fn l_real(s: f64, d: i64) -> Result<f64> {
    QuadraticCharacter::from_discriminant(d)?.l_value(s)
}

/// Fundamental discriminants with `3 ≤ |d| ≤ limit`, ordered by `|d|`, negative first.
pub fn fundamental_discriminants(limit: u64) -> Vec<i64> {
    let limit = limit.min(i64::MAX as u64) as i64;
    (3..=limit).flat_map(|k| [-k, k]).filter(|&d| is_fundamental(d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(12, 9), 0);
        assert_eq!(kronecker(-8, 6), 0);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(8, 7), 1);
        assert_eq!(kronecker(-4, -1), -1);
        assert_eq!(kronecker(5, -1), 1);
        assert_eq!(kronecker(1, 0), 1);
        assert_eq!(kronecker(5, 0), 0);
    }

    #[test]
    fn fundamental_discriminant_recognition() {
        let small: Vec<i64> = fundamental_discriminants(13);
        assert_eq!(small, vec![-3, -4, 5, -7, -8, 8, -11, 12, 13]);
        assert!(!is_fundamental(1));
        assert!(!is_fundamental(-12 * 4));
        assert!(!is_fundamental(9));
    }

    #[test]
    fn conductors() {
        assert_eq!(QuadraticCharacter::from_conductor(3).unwrap().discriminant(), -3);
        assert_eq!(QuadraticCharacter::from_conductor(5).unwrap().discriminant(), 5);
        assert_eq!(QuadraticCharacter::from_conductor(4).unwrap().discriminant(), -4);
        assert!(QuadraticCharacter::from_conductor(8).is_err());
        assert!(QuadraticCharacter::from_conductor(9).is_err());
        assert!(QuadraticCharacter::from_conductor(1).is_err());
    }

    #[test]
    fn class_number_values() {
        let cases = [
            (-3, PI / (3.0 * 3f64.sqrt())),
            (-4, PI / 4.0),
            (-7, PI / 7f64.sqrt()),
            (-8, PI / 8f64.sqrt()),
            (5, 2.0 * ((1.0 + 5f64.sqrt()) / 2.0).ln() / 5f64.sqrt()),
            (8, 2.0 * (1.0 + 2f64.sqrt()).ln() / 8f64.sqrt()),
        ];
        for (d, want) in cases {
            let got = l_real(1.0, d).unwrap();
            assert!((got - want).abs() < 1e-12, "d = {d}: {got} vs {want}");
        }
        assert!(l_real(1.0, 9).is_err());
        assert!(l_real(0.4, -4).is_err());
    }
}
