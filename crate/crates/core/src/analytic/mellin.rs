//! The Mellin-side functions `f`, `D_γ`, `J_γ` and `J̃_γ`.

use super::constants::{gcd, sum_log_p_over_p, ResidueShape};
use super::euler::EulerEngine;
use super::zeta::{zeta_real, EulerMaclaurin};
use crate::error::{invalid, Result};
use crate::sieve::{euler_phi, totients_upto};
use crate::sum::CompensatedSum;

/// Lower end of the admissible `γ` window.
pub const GAMMA_MIN: f64 = 0.75;
/// Below this distance to 1, `D_γ` switches to its derivative form.
pub const DERIVATIVE_SWITCH: f64 = 1e-4;
/// Central finite-difference step for `f′(1)`.
pub const DERIVATIVE_STEP: f64 = 1e-5;
/// Largest `Q` accepted by the direct `1/φ(q)` sums.
pub const MAX_DIRECT_Q: f64 = 2e8;

fn check_gamma(gamma: f64) -> Result<()> {
    if !(GAMMA_MIN..=1.0).contains(&gamma) {
        return invalid(format!("γ = {gamma} outside [3/4, 1]"));
    }
    Ok(())
}

fn check_class(q0: u64, a: i64) -> Result<()> {
    if q0 == 0 || a == 0 {
        return invalid("q0 must be positive and a nonzero");
    }
    if gcd(q0, a.unsigned_abs()) != 1 {
        return invalid(format!("gcd(a, q0) = gcd({a}, {q0}) must be 1"));
    }
    Ok(())
}

fn check_n(n: f64) -> Result<()> {
    if !(n >= 1.0) || !n.is_finite() {
        return invalid(format!("N must be a finite real >= 1, got {n}"));
    }
    Ok(())
}

impl EulerEngine {
    /// `f` without the window check, so that `f′(1)` can be differenced.
    fn f_raw(&self, q0: u64, a: i64, n: f64, gamma: f64) -> Result<f64> {
        let prefactor = (q0 as f64 / n).powf(gamma) / euler_phi(q0)? as f64;
        let z = self.big_z(-gamma)?.value;
        let g = super::constants::big_g(q0, a, -gamma)?;
        let zeta_left = zeta_real(1.0 - gamma)?;
        // (1 − γ) ζ(2 − γ), regular at γ = 1
        let zeta_right = EulerMaclaurin::STANDARD.zeta_times_pole(2.0 - gamma);
        Ok(prefactor * z * g * zeta_left * zeta_right)
    }

    /// `f_{q₀,a;N}(γ) = (q₀/N)^γ/φ(q₀) · Z(−γ) G_{q₀,a}(−γ) ζ(1−γ) ζ(2−γ)(1−γ)`.
    pub fn f_eval(&self, q0: u64, a: i64, n: f64, gamma: f64) -> Result<f64> {
        check_gamma(gamma)?;
        check_class(q0, a)?;
        check_n(n)?;
        self.f_raw(q0, a, n, gamma)
    }

    /// `f′(1) − f(1)` with a central difference.
    pub fn d_one_numeric(&self, q0: u64, a: i64, n: f64) -> Result<f64> {
        check_class(q0, a)?;
        check_n(n)?;
        let h = DERIVATIVE_STEP;
        let derivative = (self.f_raw(q0, a, n, 1.0 + h)? - self.f_raw(q0, a, n, 1.0 - h)?) / (2.0 * h);
        Ok(derivative - self.f_raw(q0, a, n, 1.0)?)
    }

    /// `D_γ(q₀, a; N) = (γ f(1) − f(γ)) / (1 − γ)`.
    pub fn d_gamma(&self, q0: u64, a: i64, n: f64, gamma: f64) -> Result<f64> {
        check_gamma(gamma)?;
        check_class(q0, a)?;
        check_n(n)?;
        let u = 1.0 - gamma;
        if u == 0.0 {
            return d_one_exact_with(self, q0, a, n);
        }
        if u < DERIVATIVE_SWITCH {
            let h = DERIVATIVE_STEP;
            let up = self.f_raw(q0, a, n, 1.0 + h)?;
            let mid = self.f_raw(q0, a, n, 1.0)?;
            let down = self.f_raw(q0, a, n, 1.0 - h)?;
            let first = (up - down) / (2.0 * h);
            let second = (up - 2.0 * mid + down) / (h * h);
            return Ok(first - mid - 0.5 * u * second);
        }
        let f1 = self.f_raw(q0, a, n, 1.0)?;
        Ok((gamma * f1 - self.f_raw(q0, a, n, gamma)?) / u)
    }

    /// `J̃_γ(x; q₀, a) = C_{a,q₀} {log(x/q₀²) + 2 D_{a,q₀} − 1/γ}`.
    pub fn j_tilde(&self, x: f64, q0: u64, a: i64, gamma: f64) -> Result<f64> {
        check_gamma(gamma)?;
        let c = self.c_aq(a, q0)?.value;
        let d = self.d_aq(a, q0)?.value;
        let q = q0 as f64;
        Ok(c * ((x / (q * q)).ln() + 2.0 * d - 1.0 / gamma))
    }

    /// Exact and asymptotic values of `Σ_{q≤Q, (q,a)=1, q₀|q} 1/φ(q)`.
    pub fn phi_mean(&self, big_q: f64, a: i64, q0: u64) -> Result<(f64, f64)> {
        check_class(q0, a)?;
        if !(big_q >= q0 as f64) {
            return invalid(format!("Q = {big_q} is below q0 = {q0}"));
        }
        let exact = reciprocal_totient_sum(big_q, a, q0, |_| 1.0)?;
        let asymptotic =
            self.c_aq(a, q0)?.value * ((big_q / q0 as f64).ln() + self.d_aq(a, q0)?.value);
        Ok((exact, asymptotic))
    }
}

/// `Σ_{q≤Q, (q,a)=1, q₀|q} w(q)/φ(q)`.
fn reciprocal_totient_sum(big_q: f64, a: i64, q0: u64, w: impl Fn(u64) -> f64) -> Result<f64> {
    if big_q > MAX_DIRECT_Q {
        return invalid(format!("direct sum up to {big_q} exceeds {MAX_DIRECT_Q}"));
    }
    if big_q < q0 as f64 {
        return Ok(0.0);
    }
    let limit = big_q.floor() as u64;
    let phi = totients_upto(limit);
    let abs_a = a.unsigned_abs();
    let mut acc = CompensatedSum::new();
    for q in (q0..=limit).step_by(q0 as usize) {
        if gcd(q, abs_a) == 1 {
            acc += w(q) / phi[q as usize] as f64;
        }
    }
    Ok(acc.value())
}

/// `D₁(q, a; N)` in closed form.
pub(crate) fn d_one_exact_with(engine: &EulerEngine, q: u64, a: i64, n: f64) -> Result<f64> {
    check_class(q, a)?;
    check_n(n)?;
    Ok(match ResidueShape::of(a)? {
        ResidueShape::Composite => 0.0,
        ResidueShape::PrimePower(l) => {
            let lf = l as f64;
            (1.0 - 1.0 / lf) * lf.ln() / (2.0 * n)
        }
        ResidueShape::Unit => {
            ((n / q as f64).ln() + 2.0 * engine.c0().value + sum_log_p_over_p(q)?) / (2.0 * n)
        }
    })
}

pub fn f_eval(q0: u64, a: i64, n: f64, gamma: f64) -> Result<f64> {
    EulerEngine::shared().f_eval(q0, a, n, gamma)
}

pub fn d_gamma(q0: u64, a: i64, n: f64, gamma: f64) -> Result<f64> {
    EulerEngine::shared().d_gamma(q0, a, n, gamma)
}

pub fn d_one_exact(q: u64, a: i64, n: f64) -> Result<f64> {
    d_one_exact_with(EulerEngine::shared(), q, a, n)
}

pub fn j_tilde(x: f64, q0: u64, a: i64, gamma: f64) -> Result<f64> {
    EulerEngine::shared().j_tilde(x, q0, a, gamma)
}

pub fn phi_mean(big_q: f64, a: i64, q0: u64) -> Result<(f64, f64)> {
    EulerEngine::shared().phi_mean(big_q, a, q0)
}

/// `J_γ(x, N; q₀, a)` by direct summation.
pub fn j_gamma_direct(x: f64, n: f64, q0: u64, a: i64, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    check_class(q0, a)?;
    check_n(n)?;
    if !(n <= x) {
        return invalid(format!("N = {n} exceeds x = {x}"));
    }
    let small = smoothed_r_sum(n, a, q0, gamma)?;
    let large = reciprocal_totient_sum(x / n, a, q0, |_| 1.0)?;
    Ok(small + large)
}

/// `Σ_{r≤N, (r,a)=1, q₀|r} (1 − (r/N)^γ)/φ(r)`.
pub fn smoothed_r_sum(n: f64, a: i64, q0: u64, gamma: f64) -> Result<f64> {
    check_class(q0, a)?;
    reciprocal_totient_sum(n, a, q0, |r| -(gamma * (r as f64 / n).ln()).exp_m1())
}

/// `R(x, N) = (1 − β)(log q̃N)² / (N^β x^{1−β})`.
pub fn r_remainder(x: f64, n: f64, q_tilde: u64, beta: f64) -> Result<f64> {
    if !(GAMMA_MIN..=1.0).contains(&beta) {
        return invalid(format!("β = {beta} outside [3/4, 1]"));
    }
    if !(x >= 2.0 && n >= 2.0) {
        return invalid("R(x, N) needs x, N >= 2");
    }
    Ok(remainder_formula(x, n, q_tilde, beta))
}

pub(crate) fn remainder_formula(x: f64, n: f64, q_tilde: u64, beta: f64) -> f64 {
    let l = (q_tilde as f64 * n).ln();
    (1.0 - beta) * l * l / (n.powf(beta) * x.powf(1.0 - beta))
}
