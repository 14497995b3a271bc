use super::divisors::DivisorSweep;
use super::moments::{moment_m1z, scenario_eta};
use super::params::MomentParams;
use crate::analytic::constants::gcd;
use crate::error::{invalid, Result};
use crate::sieve::totients_upto;
use crate::sum::CompensatedSum;
use crate::zeros::ExceptionalScenario;

/// Largest modulus range held in a [`PsiStarTable`].
pub const MAX_TABLE: u64 = 1 << 25;

/// Default exponent offset `δ` in the split point `x^{1/2+δ}`.
pub const DEFAULT_DELTA: f64 = 0.05;

/// `ψ*(x; q, a)` for every `q ≤ L`; zero where `(q, a) > 1`.
#[derive(Debug, Clone)]
pub struct PsiStarTable {
    values: Vec<f64>,
}

impl PsiStarTable {
    pub fn build(x: u64, a: i64, limit: u64) -> Result<Self> {
        if limit > MAX_TABLE {
            return invalid(format!("table limit {limit} exceeds {MAX_TABLE}"));
        }
        let len = limit as usize + 1;
        let sweep = DivisorSweep::new(x, a, limit)?;
        let sums = sweep.run(
            || vec![CompensatedSum::new(); len],
            |table, _, lambda, divisors| {
                for &d in divisors {
                    table[d as usize] += lambda;
                }
            },
            |total, part| {
                for (t, p) in total.iter_mut().zip(part) {
                    *t += p;
                }
            },
        )?;
        Ok(Self { values: sums.iter().map(CompensatedSum::value).collect() })
    }

    pub fn limit(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn get(&self, q: u64) -> f64 {
        self.values[q as usize]
    }

    /// `Σ_{lo < q ≤ hi} ψ*(x; q, a)`.
    pub fn range_sum(&self, lo: u64, hi: u64) -> f64 {
        let hi = hi.min(self.limit());
        if lo >= hi {
            return 0.0;
        }
        crate::sum::csum(self.values[lo as usize + 1..=hi as usize].iter().copied())
    }
}

/// The five terms of `M₁^Z = T₁ + T₂ − T₃ − T₄ + T₅` and the independently
/// computed left-hand side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    /// `Σ_{q≤U} E(x; q, a)` with `U = x^{1/2+δ}`.
    pub t1: f64,
    /// `Σ_{U<q≤x} ψ*(x; q, a)`.
    pub t2: f64,
    /// `Σ_{x/N<q≤x} ψ*(x; q, a)`.
    pub t3: f64,
    /// `x Σ_{U<q≤x/N} 1/φ(q)`.
    pub t4: f64,
    /// `η x Σ_{U<q≤x/N, q̃|q} 1/φ(q)`.
    pub t5: f64,
    /// `M₁^Z` from the divisor-bucket moment engine.
    pub m1z: f64,
    /// `m1z − (t1 + t2 − t3 − t4 + t5)`.
    pub residual: f64,
}

/// Splits `M₁^Z(x, N; a)` at `U = x^{1/2+δ}`, every term summed over its own
/// range of moduli (all `(q, a) = 1`).
pub fn decompose(params: &MomentParams, scenario: Option<&ExceptionalScenario>, delta: f64) -> Result<Decomposition> {
    if !(delta > 0.0 && delta < 0.5) {
        return invalid(format!("δ must lie in (0, 1/2), got {delta}"));
    }
    let x = params.x();
    let split = x.powf(0.5 + delta);
    if split > x / params.n() {
        return invalid(format!("x^(1/2+δ) = {split} exceeds x/N = {}", x / params.n()));
    }
    let a = params.a();
    let eta = scenario_eta(x, a, scenario)?;
    let xf = params.x_floor();
    let u = split.floor() as u64;
    let q_max = params.q_max();
    let table = PsiStarTable::build(xf, a, xf)?;
    let phi = totients_upto(q_max);
    let abs_a = a.unsigned_abs();
    let q_tilde = scenario.map(ExceptionalScenario::q_tilde);

    let mut t1 = CompensatedSum::new();
    let mut t4 = CompensatedSum::new();
    let mut t5 = CompensatedSum::new();
    for q in 1..=q_max {
        if gcd(q, abs_a) != 1 {
            continue;
        }
        let inv_phi = 1.0 / f64::from(phi[q as usize]);
        let marked = q_tilde.is_some_and(|t| q % t == 0);
        if q <= u {
            let weight = if marked { 1.0 - eta } else { 1.0 };
            t1 += table.get(q);
            t1 += -weight * x * inv_phi;
        } else {
            t4 += x * inv_phi;
            if marked {
                t5 += eta * x * inv_phi;
            }
        }
    }
    let t2 = table.range_sum(u, xf);
    let t3 = table.range_sum(q_max, xf);
    let m1z = moment_m1z(params, scenario)?.raw;
    let (t1, t4, t5) = (t1.value(), t4.value(), t5.value());
    let mut rhs = CompensatedSum::new();
    for term in [t1, t2, -t3, -t4, t5] {
        rhs += term;
    }
    Ok(Decomposition { t1, t2, t3, t4, t5, m1z, residual: m1z - rhs.value() })
}
