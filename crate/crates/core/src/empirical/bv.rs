use super::psi::prime_powers_upto;
use crate::analytic::constants::gcd;
use crate::error::{invalid, Result};
use crate::sum::CompensatedSum;
use crate::zeros::ExceptionalScenario;

/// Which residues enter the inner maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BvResidues {
    /// Worst residue `a′` coprime to `q`.
    Worst,
    /// Only `a′ ≡ a`; moduli with `(q, a) > 1` are skipped.
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BvOptions {
    /// Number of geometrically spaced `y` values in `[2, x]`.
    pub grid_points: usize,
    pub residues: BvResidues,
}

impl Default for BvOptions {
    fn default() -> Self {
        Self { grid_points: 32, residues: BvResidues::Worst }
    }
}

/// Geometric grid `2 = y₀ < … < y_{G−1} = x`.
pub fn bv_grid(x: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![x];
    }
    let ratio = (x / 2.0).ln();
    (0..points)
        .map(|j| if j + 1 == points { x } else { 2.0 * (ratio * j as f64 / (points - 1) as f64).exp() })
        .collect()
}

/// `Σ_{q≤Q} max_y max_{a′} |ψ(y; q, a′) − (1 − η_{x,a′} 1_{q̃|q}) y/φ(q)|`
/// with `y` on [`bv_grid`].
pub fn bv_error_sum(
    x: f64,
    big_q: f64,
    a: i64,
    scenario: Option<&ExceptionalScenario>,
    options: BvOptions,
) -> Result<f64> {
    if !(x >= 2.0) || !x.is_finite() {
        return invalid(format!("x must be a finite real >= 2, got {x}"));
    }
    if big_q > x {
        return invalid(format!("Q = {big_q} exceeds x = {x}"));
    }
    if options.grid_points == 0 {
        return invalid("the y-grid needs at least one point");
    }
    if big_q < 1.0 {
        return Ok(0.0);
    }
    let q_max = big_q.floor() as u64;
    let grid = bv_grid(x, options.grid_points);
    let entries = prime_powers_upto(x.floor() as u64)?;
    let phi = crate::sieve::totients_upto(q_max);
    let eta_scale = scenario.map(|s| (s, 1.0 / (s.beta() * x.powf(1.0 - s.beta()))));
    let mut total = CompensatedSum::new();
    let mut psi = Vec::new();
    for q in 1..=q_max {
        let fixed = a.rem_euclid(q as i64) as u64;
        if options.residues == BvResidues::Fixed && gcd(q, a.unsigned_abs()) != 1 {
            continue;
        }
        let residues: Vec<u64> = match options.residues {
            BvResidues::Worst => (0..q).filter(|&r| gcd(r, q) == 1).collect(),
            BvResidues::Fixed => vec![fixed],
        };
        // 1 − η_{x,a′} when q̃ | q, else 1.
        let weights: Vec<f64> = residues
            .iter()
            .map(|&r| match eta_scale {
                Some((s, scale)) if q % s.q_tilde() == 0 => 1.0 - f64::from(s.chi_at(r as i64)) * scale,
                _ => 1.0,
            })
            .collect();
        let inv_phi = 1.0 / f64::from(phi[q as usize]);
        psi.clear();
        psi.resize(q as usize, CompensatedSum::new());
        let mut worst = 0.0f64;
        let mut next = 0;
        for &y in &grid {
            while next < entries.len() && entries[next].n as f64 <= y {
                psi[(entries[next].n % q) as usize] += entries[next].value;
                next += 1;
            }
            for (&r, &w) in residues.iter().zip(&weights) {
                worst = worst.max((psi[r as usize].value() - w * y * inv_phi).abs());
            }
        }
        total += worst;
    }
    Ok(total.value())
}
