//! Real zeros near `s = 1` and the exceptional-character scan.

use rayon::prelude::*;

use super::character::{fundamental_discriminants, QuadraticCharacter};
use super::scenario::ExceptionalScenario;
use crate::error::{invalid, Result};

/// Grid size used to detect sign changes.
pub const GRID_POINTS: usize = 256;
/// Bisection stops once the bracket is this narrow.
pub const ROOT_TOLERANCE: f64 = 1e-12;

/// Largest root of `f` in `[lo, hi)` detected by a sign change on an
/// evenly spaced grid of `points` nodes spanning `[lo, hi]`.
pub fn largest_root_on_grid<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, points: usize) -> Option<f64> {
    assert!(points >= 2 && lo < hi);
    let node = |i: usize| if i + 1 == points { hi } else { lo + (hi - lo) * i as f64 / (points - 1) as f64 };
    let mut right = node(points - 1);
    let mut f_right = f(right);
    for i in (0..points - 1).rev() {
        let left = node(i);
        let f_left = f(left);
        if f_left == 0.0 {
            return Some(left);
        }
        if f_left.signum() != f_right.signum() && f_right != 0.0 {
            return Some(bisect(&f, left, right, f_left));
        }
        right = left;
        f_right = f_left;
    }
    None
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let lo_sign = f_lo.signum();
    while hi - lo > ROOT_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        let value = f(mid);
        if value == 0.0 {
            return mid;
        }
        if value.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Largest real zero of `L(s, χ_d)` in `[lo, 1)`, if the grid sees one.
pub fn max_real_zero(d: i64, lo: f64) -> Result<Option<f64>> {
    if !(0.5..1.0).contains(&lo) {
        return invalid(format!("lower end {lo} outside [1/2, 1)"));
    }
    let chi = QuadraticCharacter::from_discriminant(d)?;
    Ok(largest_root_on_grid(|s| chi.l_value_unchecked(s), lo, 1.0, GRID_POINTS).filter(|&beta| beta < 1.0))
}

/// Lower end `1 − b/√log x` of the Page window.
pub fn page_window(x: f64, b: f64) -> f64 {
    1.0 - b / x.ln().sqrt()
}

/// Conductor limit `e^{√log x}`.
pub fn page_conductor_limit(x: f64) -> f64 {
    x.ln().sqrt().exp()
}

/// Searches every fundamental `|d| ≤ min(q_max, e^{√log x})` for a real zero
/// above `max(1 − b/√log x, 3/4)`; returns the one with the largest `β`.
///
/// Ties go to the smaller conductor, then to the negative discriminant.
pub fn exceptional_scan(x: f64, q_max: u64, b: f64) -> Result<Option<ExceptionalScenario>> {
    if !(b > 0.0) {
        return invalid(format!("Page constant b must be positive, got {b}"));
    }
    if !(x > std::f64::consts::E) || !x.is_finite() {
        return invalid(format!("x must exceed e, got {x}"));
    }
    let limit = (q_max as f64).min(page_conductor_limit(x)).floor() as u64;
    let lo = page_window(x, b).max(super::scenario::BETA_MIN);
    if lo >= 1.0 {
        return Ok(None);
    }
    let found: Vec<(i64, f64)> = fundamental_discriminants(limit)
        .into_par_iter()
        .map(|d| max_real_zero(d, lo).map(|z| z.map(|beta| (d, beta))))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    // Discriminants arrive ordered by (|d|, negative first); keep the first maximal β.
    let best = found.into_iter().fold(None::<(i64, f64)>, |best, cand| match best {
        Some(b) if b.1 >= cand.1 => Some(b),
        _ => Some(cand),
    });
    best.map(|(d, beta)| ExceptionalScenario::new(QuadraticCharacter::from_discriminant(d)?, beta))
        .transpose()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_root() {
        let root = largest_root_on_grid(|s| (s - 0.9) * (s + 2.0), 0.5, 1.0, GRID_POINTS).unwrap();
        assert!((root - 0.9).abs() < 1e-12);
        let top = largest_root_on_grid(|s| (s - 0.6) * (s - 0.95), 0.5, 1.0, GRID_POINTS).unwrap();
        assert!((top - 0.95).abs() < 1e-12);
        assert!(largest_root_on_grid(|s| 1.0 + s, 0.5, 1.0, GRID_POINTS).is_none());
    }

    #[test]
    fn small_conductors_have_no_real_zero() {
        assert_eq!(max_real_zero(-4, 0.8).unwrap(), None);
        assert_eq!(max_real_zero(-3, 0.5).unwrap(), None);
        assert!(max_real_zero(-4, 0.3).is_err());
        assert!(max_real_zero(12 * 4, 0.8).is_err());
    }

    #[test]
    fn scan_edges() {
        assert!(exceptional_scan(1e6, 2, 0.1).unwrap().is_none());
        assert!(exceptional_scan(1e6, 500, 0.1).unwrap().is_none());
        assert!(exceptional_scan(1e6, 500, 0.0).is_err());
    }
}
