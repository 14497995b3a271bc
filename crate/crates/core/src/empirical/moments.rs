use super::decompose::Decomposition;
use super::divisors::DivisorSweep;
use super::params::MomentParams;
use crate::analytic::constants::gcd;
use crate::analytic::euler::EulerEngine;
use crate::error::{invalid, Error, Result};
use crate::sieve::totients_upto;
use crate::sum::CompensatedSum;
use crate::zeros::{eta, predict_with, ExceptionalScenario};

/// Largest modulus range for the `1/φ(q)` prefix sums.
pub const MAX_Q: u64 = 1 << 31;

/// Observed and predicted first moment for one `(x, N, a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub params: MomentParams,
    /// `M₁` or `M₁^Z`.
    pub raw: f64,
    /// `raw / ((φ(|a|)/|a|) · x/N)`.
    pub normalized: f64,
    /// `μ(a, N)`.
    pub predicted_mu: f64,
    /// Scenario-dependent correction to `μ`; zero without a scenario.
    pub secondary: f64,
    /// `normalized − predicted_mu − secondary`.
    pub deviation: f64,
    pub decomposition: Option<Decomposition>,
}

/// Sorted distinct thresholds and, for each input, its index among them.
fn bucket_thresholds(limits: &[u64]) -> (Vec<u64>, Vec<usize>) {
    let mut sorted = limits.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let index = limits.iter().map(|l| sorted.binary_search(l).expect("present")).collect();
    (sorted, index)
}

/// `Σ_{q≤L_k, (q,a)=1} ψ*(x; q, a)` for each `L_k`.
pub(crate) fn psi_star_prefix(x: u64, a: i64, limits: &[u64]) -> Result<Vec<f64>> {
    let (sorted, index) = bucket_thresholds(limits);
    let Some(&top) = sorted.last() else { return Ok(Vec::new()) };
    let k = sorted.len();
    let sweep = DivisorSweep::new(x, a, top)?;
    let buckets = sweep.run(
        || (vec![CompensatedSum::new(); k], vec![0u32; k]),
        |(sums, counts), _, lambda, divisors| {
            for &d in divisors {
                counts[sorted.partition_point(|&t| t < d)] += 1;
            }
            for (sum, count) in sums.iter_mut().zip(counts.iter_mut()) {
                if *count != 0 {
                    *sum += lambda * f64::from(*count);
                    *count = 0;
                }
            }
        },
        |(total, _), (part, _)| {
            for (t, p) in total.iter_mut().zip(part) {
                *t += p;
            }
        },
    )?;
    Ok(cumulate(&buckets.0, &index))
}

fn cumulate(buckets: &[CompensatedSum], index: &[usize]) -> Vec<f64> {
    let mut running = CompensatedSum::new();
    let prefix: Vec<f64> = buckets
        .iter()
        .map(|b| {
            running += *b;
            running.value()
        })
        .collect();
    index.iter().map(|&i| prefix[i]).collect()
}

/// `Σ_{q≤L_k, (q,a)=1} 1/φ(q)` and the same restricted to `q̃ | q`.
pub(crate) fn reciprocal_phi_prefix(a: i64, limits: &[u64], q_tilde: Option<u64>) -> Result<(Vec<f64>, Vec<f64>)> {
    let (sorted, index) = bucket_thresholds(limits);
    let Some(&top) = sorted.last() else { return Ok((Vec::new(), Vec::new())) };
    if top > MAX_Q {
        return invalid(format!("modulus range {top} exceeds {MAX_Q}"));
    }
    let phi = totients_upto(top);
    let abs_a = a.unsigned_abs();
    let mut all = vec![CompensatedSum::new(); sorted.len()];
    let mut marked = vec![CompensatedSum::new(); sorted.len()];
    let mut bucket = 0;
    for q in 1..=top {
        while sorted[bucket] < q {
            bucket += 1;
        }
        if gcd(q, abs_a) != 1 {
            continue;
        }
        let term = 1.0 / f64::from(phi[q as usize]);
        all[bucket] += term;
        if q_tilde.is_some_and(|t| q % t == 0) {
            marked[bucket] += term;
        }
    }
    Ok((cumulate(&all, &index), cumulate(&marked, &index)))
}

/// `η_{x,a}`, with a coprimality failure reported as an invalid scenario.
pub(crate) fn scenario_eta(x: f64, a: i64, scenario: Option<&ExceptionalScenario>) -> Result<f64> {
    let Some(s) = scenario else { return Ok(0.0) };
    eta(x, a, s).map(|e| e.value).map_err(|e| match e {
        Error::InvalidArgument(m) => Error::InvalidScenario(m),
        other => other,
    })
}

/// Raw `M₁^Z(x, N; a)` for several `N` from one divisor sweep.
pub fn m1z_raw_grid(x: f64, a: i64, ns: &[f64], scenario: Option<&ExceptionalScenario>) -> Result<Vec<f64>> {
    let params: Vec<MomentParams> = ns.iter().map(|&n| MomentParams::new(x, n, a)).collect::<Result<_>>()?;
    let eta = scenario_eta(x, a, scenario)?;
    let limits: Vec<u64> = params.iter().map(MomentParams::q_max).collect();
    let xf = x.floor() as u64;
    let psi_side = psi_star_prefix(xf, a, &limits)?;
    let (phi_side, marked) = reciprocal_phi_prefix(a, &limits, scenario.map(ExceptionalScenario::q_tilde))?;
    Ok((0..ns.len())
        .map(|i| {
            let mut acc = CompensatedSum::from(psi_side[i]);
            acc += -x * phi_side[i];
            acc += eta * x * marked[i];
            acc.value()
        })
        .collect())
}

/// Reports for each `N` in `ns` against an explicit Euler-product engine.
pub fn moment_grid_with(
    engine: &EulerEngine,
    x: f64,
    a: i64,
    ns: &[f64],
    scenario: Option<&ExceptionalScenario>,
) -> Result<Vec<MomentReport>> {
    let raws = m1z_raw_grid(x, a, ns, scenario)?;
    ns.iter()
        .zip(raws)
        .map(|(&n, raw)| {
            let params = MomentParams::new(x, n, a)?;
            let prediction = predict_with(engine, &params, scenario)?;
            let normalized = raw / params.normalizer()?;
            Ok(MomentReport {
                params,
                raw,
                normalized,
                predicted_mu: prediction.mu,
                secondary: prediction.secondary,
                deviation: normalized - prediction.mu - prediction.secondary,
                decomposition: None,
            })
        })
        .collect()
}

/// [`moment_grid_with`] using the shared engine.
pub fn moment_grid(x: f64, a: i64, ns: &[f64], scenario: Option<&ExceptionalScenario>) -> Result<Vec<MomentReport>> {
    moment_grid_with(EulerEngine::shared(), x, a, ns, scenario)
}

/// `M₁(x, N; a) = Σ_{q≤x/N, (q,a)=1} (ψ*(x; q, a) − x/φ(q))`.
pub fn moment_m1(params: &MomentParams) -> Result<MomentReport> {
    moment_m1z(params, None)
}

/// `M₁^Z(x, N; a) = Σ_{q≤x/N, (q,a)=1} (ψ*(x; q, a) − (1 − 1_{q̃|q} η_{x,a}) x/φ(q))`.
pub fn moment_m1z(params: &MomentParams, scenario: Option<&ExceptionalScenario>) -> Result<MomentReport> {
    let mut reports = moment_grid(params.x(), params.a(), &[params.n()], scenario)?;
    Ok(reports.remove(0))
}
