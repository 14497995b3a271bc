use super::moments::psi_star_prefix;
use super::psi::{prime_powers_upto, psi_star_from};
use crate::analytic::constants::gcd;
use crate::error::{invalid, Result};
use crate::sum::CompensatedSum;

/// `T₃ = Σ_{x/N<q≤x, (q,a)=1} ψ*(x; q, a)` summed directly over large moduli,
/// and after the switch `n = a + qr` to small cofactors `r`:
/// `Σ_{1≤r<N−aN/x, (r,a)=1} (ψ*(x; r, a) − ψ*(a + rx/N; r, a))`.
pub fn divisor_switch_t3(x: f64, n: f64, a: i64) -> Result<(f64, f64)> {
    if a == 0 || !(x >= 2.0) || !(n >= 1.0) {
        return invalid("divisor switching needs x >= 2, N >= 1 and a != 0");
    }
    if n > x.sqrt() {
        return invalid(format!("N = {n} exceeds sqrt(x) = {}", x.sqrt()));
    }
    let abs_a = a.unsigned_abs() as f64;
    if abs_a * n >= x {
        return invalid(format!("|a| N = {} must stay below x = {x}", abs_a * n));
    }
    let xf = x.floor() as u64;
    let q_max = (x / n).floor() as u64;
    let prefix = psi_star_prefix(xf, a, &[q_max, xf])?;
    let direct = prefix[1] - prefix[0];

    let entries = prime_powers_upto(xf)?;
    let r_bound = n - a as f64 * n / x;
    let mut switched = CompensatedSum::new();
    let mut r = 1u64;
    while (r as f64) < r_bound {
        if gcd(r, a.unsigned_abs()) == 1 {
            switched += psi_star_from(&entries, x, r, a);
            switched += -psi_star_from(&entries, a as f64 + r as f64 * x / n, r, a);
        }
        r += 1;
    }
    Ok((direct, switched.value()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_ranges() {
        let (direct, switched) = divisor_switch_t3(1e4, 1.0, 1).unwrap();
        assert_eq!(direct, 0.0);
        assert_eq!(switched, 0.0);
    }

    #[test]
    fn preconditions() {
        assert!(divisor_switch_t3(1e4, 101.0, 1).is_err());
        assert!(divisor_switch_t3(1e4, 50.0, 200).is_err());
    }

    #[test]
    fn identity_for_unit_class() {
        let (direct, switched) = divisor_switch_t3(1e5, 30.0, 1).unwrap();
        assert!((direct - switched).abs() < 1e-6, "{direct} vs {switched}");
    }
}
