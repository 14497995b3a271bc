//! Hypothetical exceptional characters and the predicted moments they imply.

use super::character::QuadraticCharacter;
use crate::analytic::constants::ERROR_EXPONENT;
use crate::analytic::euler::EulerEngine;
use crate::analytic::mellin::{d_one_exact_with, remainder_formula, smoothed_r_sum};
use crate::analytic::mu_tilde;
use crate::empirical::MomentParams;
use crate::error::{invalid, Error, Result};
use crate::sieve::euler_phi;

/// Smallest admissible exceptional zero.
pub const BETA_MIN: f64 = 0.75;

/// A real character `χ̃` of conductor `q̃` with a real zero `β ∈ [3/4, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExceptionalScenario {
    character: QuadraticCharacter,
    beta: f64,
}

impl ExceptionalScenario {
    pub fn new(character: QuadraticCharacter, beta: f64) -> Result<Self> {
        if !(BETA_MIN..1.0).contains(&beta) {
            return Err(Error::InvalidScenario(format!("β = {beta} outside [3/4, 1)")));
        }
        Ok(Self { character, beta })
    }

    /// Scenario for the unique real primitive character of conductor `q̃`.
    pub fn from_conductor(q_tilde: u64, beta: f64) -> Result<Self> {
        let character = QuadraticCharacter::from_conductor(q_tilde).map_err(|e| match e {
            Error::InvalidArgument(m) => Error::InvalidScenario(m),
            other => other,
        })?;
        Self::new(character, beta)
    }

    pub fn character(&self) -> QuadraticCharacter {
        self.character
    }

    pub fn q_tilde(&self) -> u64 {
        self.character.conductor()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `χ̃(a)`; zero exactly when `gcd(a, q̃) > 1`.
    pub fn chi_at(&self, a: i64) -> i32 {
        self.character.chi(a)
    }
}

/// `η_{x,a} ∈ (−1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaValue {
    pub value: f64,
}

/// `η_{x,a} = χ̃(a) / (β x^{1−β})`.
pub fn eta(x: f64, a: i64, scenario: &ExceptionalScenario) -> Result<EtaValue> {
    if !(x >= 2.0) {
        return invalid(format!("η needs x >= 2, got {x}"));
    }
    let chi = scenario.chi_at(a);
    if chi == 0 {
        return invalid(format!("gcd(a, q̃) = gcd({a}, {}) > 1", scenario.q_tilde()));
    }
    let beta = scenario.beta();
    let value = f64::from(chi) / (beta * x.powf(1.0 - beta));
    if value.abs() >= 1.0 {
        return Err(Error::InvalidScenario(format!(
            "|η| = {} >= 1 for x = {x}, β = {beta}: x is too small for this zero",
            value.abs()
        )));
    }
    Ok(EtaValue { value })
}

/// Which estimate produced a [`Prediction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictionBranch {
    /// No exceptional character: `μ(a, N)`.
    Unconditional,
    /// `N < q̃`: `μ` plus the explicit `η` correction.
    BelowConductor,
    /// `N ≥ q̃`: `(1 − η) μ + η μ̃`.
    AboveConductor,
}

/// Predicted normalized moment and its bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub branch: PredictionBranch,
    pub mu: f64,
    /// `predicted − mu`.
    pub secondary: f64,
    pub predicted: f64,
    pub eta: Option<f64>,
    /// `R(x, N)`; zero without a scenario.
    pub remainder: f64,
    /// `(N/q̃)^{−171/448}`, or `N^{−171/448}` without a scenario.
    pub error_scale: f64,
    /// `(|a|/φ(|a|)) N (η D_β(q̃, a; N) − D₁(1, a; N))`, the main term before
    /// `D_β` is replaced by its approximation.
    pub main_term_direct: f64,
}

fn unit_ratio(a: i64) -> Result<f64> {
    let abs_a = a.unsigned_abs();
    Ok(abs_a as f64 / euler_phi(abs_a)? as f64)
}

/// [`predict_with_scenario`] against an explicit Euler-product engine.
pub fn predict_with(
    engine: &EulerEngine,
    params: &MomentParams,
    scenario: Option<&ExceptionalScenario>,
) -> Result<Prediction> {
    let (x, n, a) = (params.x(), params.n(), params.a());
    let mu = engine.mu(a, n)?;
    let d_one = d_one_exact_with(engine, 1, a, n)?;
    let ratio = unit_ratio(a)?;
    let Some(scenario) = scenario else {
        return Ok(Prediction {
            branch: PredictionBranch::Unconditional,
            mu,
            secondary: 0.0,
            predicted: mu,
            eta: None,
            remainder: 0.0,
            error_scale: n.powf(-ERROR_EXPONENT),
            main_term_direct: -ratio * n * d_one,
        });
    };
    let eta = eta(x, a, scenario)?.value;
    predict_from_eta(engine, params, scenario, eta, mu, d_one)
}

fn predict_from_eta(
    engine: &EulerEngine,
    params: &MomentParams,
    scenario: &ExceptionalScenario,
    eta: f64,
    mu: f64,
    d_one: f64,
) -> Result<Prediction> {
    let (x, n, a) = (params.x(), params.n(), params.a());
    let q_tilde = scenario.q_tilde();
    let beta = scenario.beta();
    let qf = q_tilde as f64;
    let (branch, predicted) = if n < qf {
        let r_sum = smoothed_r_sum(n, a, q_tilde, beta)?;
        let c = engine.c_aq(a, q_tilde)?.value;
        let d = engine.d_aq(a, q_tilde)?.value;
        let inner = r_sum - c * ((n / qf).ln() + d - 1.0 / beta);
        (PredictionBranch::BelowConductor, mu + n * eta * inner)
    } else {
        (PredictionBranch::AboveConductor, (1.0 - eta) * mu + eta * mu_tilde(a, q_tilde)?)
    };
    let d_beta = engine.d_gamma(q_tilde, a, n, beta)?;
    Ok(Prediction {
        branch,
        mu,
        secondary: predicted - mu,
        predicted,
        eta: Some(eta),
        remainder: remainder_formula(x, n, q_tilde, beta),
        error_scale: (n / qf).powf(-ERROR_EXPONENT),
        main_term_direct: unit_ratio(a)? * n * (eta * d_beta - d_one),
    })
}

/// Predicted normalized `M₁^Z(x, N; a)`.
pub fn predict_with_scenario(params: &MomentParams, scenario: Option<&ExceptionalScenario>) -> Result<Prediction> {
    predict_with(EulerEngine::shared(), params, scenario)
}

/// Upper bound `−½ log N − C₀` for the normalized `M₁(x, N; ±1)`, plus the
/// explicit part `−η N C_{1,q̃} log(x/q̃²)` of the exceptional correction.
pub fn unconditional_bound(params: &MomentParams, scenario: Option<&ExceptionalScenario>) -> Result<f64> {
    unconditional_bound_with(EulerEngine::shared(), params, scenario)
}

pub fn unconditional_bound_with(
    engine: &EulerEngine,
    params: &MomentParams,
    scenario: Option<&ExceptionalScenario>,
) -> Result<f64> {
    let (x, n, a) = (params.x(), params.n(), params.a());
    if a.unsigned_abs() != 1 {
        return invalid(format!("the unconditional bound is stated for a = ±1, got {a}"));
    }
    let base = -0.5 * n.ln() - engine.c0().value;
    let Some(scenario) = scenario else {
        return Ok(base);
    };
    let eta = eta(x, a, scenario)?.value;
    let q = scenario.q_tilde() as f64;
    let correction = -eta * n * engine.c_aq(1, scenario.q_tilde())?.value * (x / (q * q)).ln();
    debug_assert!(eta <= 0.0 || correction <= 0.0 || x < q * q);
    Ok(base + correction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{c0, d_one_exact};

    fn scenario(q: u64, beta: f64) -> ExceptionalScenario {
        ExceptionalScenario::from_conductor(q, beta).unwrap()
    }

    #[test]
    fn scenario_validation() {
        assert!(ExceptionalScenario::from_conductor(3, 0.7).is_err());
        assert!(ExceptionalScenario::from_conductor(3, 1.0).is_err());
        assert!(matches!(ExceptionalScenario::from_conductor(9, 0.9), Err(Error::InvalidScenario(_))));
        let s = scenario(3, 0.9);
        assert_eq!(s.q_tilde(), 3);
        assert_eq!(s.chi_at(6), 0);
        assert_eq!(s.chi_at(2), -1);
        assert_eq!(s.chi_at(4), 1);
    }

    #[test]
    fn eta_values() {
        let s = scenario(3, 0.9);
        let e = eta(1e6, 1, &s).unwrap().value;
        assert!((e - 1.0 / (0.9 * 10f64.powf(0.6))).abs() < 1e-15);
        assert!((e - 0.2791).abs() < 1e-4);
        assert!(eta(1e6, 2, &s).unwrap().value < 0.0);
        assert!(eta(1e6, 3, &s).is_err());
        let near_one = scenario(3, 1.0 - 1e-12);
        assert!((eta(1e6, 1, &near_one).unwrap().value - 1.0).abs() < 1e-10);
        assert!(matches!(eta(3.0, 1, &scenario(3, 0.75)), Err(Error::InvalidScenario(_))));
    }

    #[test]
    fn unconditional_predictions() {
        let p = predict_with_scenario(&MomentParams::new(1e6, 50.0, 6).unwrap(), None).unwrap();
        assert_eq!(p.predicted, 0.0);
        assert_eq!(p.main_term_direct, 0.0);
        for a in [1, -1, 9, 8] {
            let params = MomentParams::new(1e6, 70.0, a).unwrap();
            let p = predict_with_scenario(&params, None).unwrap();
            assert!((p.predicted - p.main_term_direct).abs() < 1e-12, "a = {a}");
        }
    }

    #[test]
    fn zero_eta_leaves_mu() {
        let engine = EulerEngine::shared();
        let s = scenario(7, 0.9);
        for n in [3.0, 50.0] {
            let params = MomentParams::new(1e6, n, 1).unwrap();
            let mu = engine.mu(1, n).unwrap();
            let d1 = d_one_exact(1, 1, n).unwrap();
            let p = predict_from_eta(engine, &params, &s, 0.0, mu, d1).unwrap();
            assert_eq!(p.predicted, mu);
        }
    }

    #[test]
    fn above_conductor_composition() {
        let x = 1e8;
        let s = scenario(3, 0.99);
        let params = MomentParams::new(x, 20.0, 1).unwrap();
        let p = predict_with_scenario(&params, Some(&s)).unwrap();
        let e = 1.0 / (0.99 * x.powf(0.01));
        let ln3 = 3f64.ln();
        let want = (1.0 - e) * (-0.5 * 20f64.ln() - c0().value) + e * 0.5 * (ln3 - ln3 / 3.0);
        assert_eq!(p.branch, PredictionBranch::AboveConductor);
        assert!((p.predicted - want).abs() < 1e-12);
        assert!((p.secondary - (p.predicted - p.mu)).abs() < 1e-15);
    }

    #[test]
    fn below_conductor_branch() {
        let s = scenario(101, 0.9);
        let params = MomentParams::new(1e8, 30.0, 1).unwrap();
        let p = predict_with_scenario(&params, Some(&s)).unwrap();
        assert_eq!(p.branch, PredictionBranch::BelowConductor);
        let e = p.eta.unwrap();
        let c = crate::analytic::c_aq(1, 101).unwrap().value;
        let d = crate::analytic::d_aq(1, 101).unwrap().value;
        let want = p.mu - 30.0 * e * c * ((30.0f64 / 101.0).ln() + d - 1.0 / 0.9);
        assert!((p.predicted - want).abs() < 1e-12);
    }

    #[test]
    fn unconditional_bound_cases() {
        let c = c0().value;
        let b = unconditional_bound(&MomentParams::new(1e6, 100.0, 1).unwrap(), None).unwrap();
        assert!((b - (-0.5 * 100f64.ln() - c)).abs() < 1e-15);
        assert!((b + 4.3878).abs() < 1e-4);
        let b1 = unconditional_bound(&MomentParams::new(1e6, 1.0, 1).unwrap(), None).unwrap();
        assert_eq!(b1, -c);
        let with = unconditional_bound(&MomentParams::new(1e8, 100.0, 1).unwrap(), Some(&scenario(3, 0.95))).unwrap();
        assert!(with < b);
        assert!(unconditional_bound(&MomentParams::new(1e6, 10.0, 2).unwrap(), None).is_err());
    }
}
