//! Prime sums and Euler products with certified truncation bounds.
//!
//! A sum `Σ_p h(p)` is split at a cutoff `P`. Primes `p ≤ P` are summed
//! explicitly. For the tail, write `g(t) = h(t)/log t` and integrate against
//! `dθ(t)`:
//!
//! ```text
//! Σ_{p>P} h(p) = g(P)(P − θ(P)) + ∫_P^∞ g(t) dt − ∫_P^∞ (θ(t) − t) g'(t) dt
//! ```
//!
//! The first two terms are added to the value; the last one is bounded using
//! `|θ(t) − t| ≤ 2.37 √t` for `11 < t ≤ 10^19` (Büthe's `|ψ(t) − t| < 0.94 √t`
//! plus Rosser-Schoenfeld's `ψ(t) − θ(t) < 1.4262 √t`) and `|θ(t) − t| ≤ t`
//! beyond. That bound is what `truncation_bound` reports.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{invalid, Result};
use crate::sieve::primes_upto;
use crate::sum::CompensatedSum;

/// Default prime cutoff for every Euler product.
pub const DEFAULT_CUTOFF: u64 = 1 << 24;
/// Smallest cutoff accepted by [`EulerEngine::new`].
pub const MIN_CUTOFF: u64 = 10_000;
/// Largest cutoff accepted by [`EulerEngine::new`].
pub const MAX_CUTOFF: u64 = 1 << 30;

const THETA_SQRT_CONSTANT: f64 = 2.37;
const THETA_SQRT_RANGE_END: f64 = 1e19;

/// A numerically evaluated prime sum or product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerValue {
    pub value: f64,
    /// Upper bound on `|value − exact|` coming from the tail `p > cutoff`.
    pub truncation_bound: f64,
    /// Largest prime summed explicitly.
    pub cutoff: u64,
}

impl EulerValue {
    pub fn exact(value: f64, cutoff: u64) -> Self {
        Self { value, truncation_bound: 0.0, cutoff }
    }

    /// `exp(self)`, propagating the bound.
    pub fn exp(self) -> Self {
        let value = self.value.exp();
        Self { value, truncation_bound: value * self.truncation_bound.exp_m1(), cutoff: self.cutoff }
    }

    /// Multiplies by an exactly known factor.
    pub fn scale(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            truncation_bound: self.truncation_bound * factor.abs(),
            cutoff: self.cutoff,
        }
    }

    /// Adds an exactly known constant.
    pub fn shift(self, offset: f64) -> Self {
        Self { value: self.value + offset, ..self }
    }
}

/// Prime table plus the machinery to sum smooth functions over all primes.
pub struct EulerEngine {
    cutoff: u64,
    largest_prime: u64,
    primes: Vec<f64>,
    logs: Vec<f64>,
    theta: f64,
    z_cache: Mutex<HashMap<u64, EulerValue>>,
}

impl std::fmt::Debug for EulerEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EulerEngine")
            .field("cutoff", &self.cutoff)
            .field("primes", &self.primes.len())
            .finish()
    }
}

impl EulerEngine {
    pub fn new(cutoff: u64) -> Result<Self> {
        if !(MIN_CUTOFF..=MAX_CUTOFF).contains(&cutoff) {
            return invalid(format!("prime cutoff {cutoff} outside [{MIN_CUTOFF}, {MAX_CUTOFF}]"));
        }
        let primes_u: Vec<u64> = primes_upto(cutoff);
        let largest_prime = *primes_u.last().expect("cutoff >= 2");
        let primes: Vec<f64> = primes_u.iter().map(|&p| p as f64).collect();
        let logs: Vec<f64> = primes.iter().map(|p| p.ln()).collect();
        let theta = crate::sum::csum(logs.iter().copied());
        Ok(Self { cutoff, largest_prime, primes, logs, theta, z_cache: Mutex::new(HashMap::new()) })
    }

    /// Engine with [`DEFAULT_CUTOFF`], built once per process.
    pub fn shared() -> &'static EulerEngine {
        static ENGINE: OnceLock<EulerEngine> = OnceLock::new();
        ENGINE.get_or_init(|| EulerEngine::new(DEFAULT_CUTOFF).expect("default cutoff is valid"))
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    /// `θ(P) = Σ_{p ≤ P} log p`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `Σ_p h(p)` over all primes not in `excluded`.
    ///
    /// `h(t, log t)` must be smooth for real `t ≥ cutoff`, and `h(t)/log t`
    /// must tend to zero faster than `1/t`.
    pub fn prime_sum<H>(&self, h: H, excluded: &[u64]) -> EulerValue
    where
        H: Fn(f64, f64) -> f64,
    {
        let mut acc = CompensatedSum::new();
        for (&p, &l) in self.primes.iter().zip(&self.logs) {
            acc += h(p, l);
        }
        for &q in excluded {
            let qf = q as f64;
            acc += -h(qf, qf.ln());
        }
        let (tail, bound) = self.tail(&h);
        acc += tail;
        EulerValue { value: acc.value(), truncation_bound: bound, cutoff: self.largest_prime }
    }

    /// `Π_p F(p)` given `log F(p)`.
    pub fn prime_product<H>(&self, log_factor: H, excluded: &[u64]) -> EulerValue
    where
        H: Fn(f64, f64) -> f64,
    {
        self.prime_sum(log_factor, excluded).exp()
    }

    fn tail<H: Fn(f64, f64) -> f64>(&self, h: &H) -> (f64, f64) {
        let p = self.cutoff as f64;
        let g = |t: f64| {
            let l = t.ln();
            h(t, l) / l
        };
        let main = g(p) * (p - self.theta) + integrate_to_infinity(&g, p);
        // |∫ E g'| with |E(t)| ≤ c √t up to 10^19 and ≤ t afterwards.
        let dg = |t: f64| {
            let eps = 1e-4;
            (g(t * (1.0 + eps)) - g(t * (1.0 - eps))) / (2.0 * eps * t)
        };
        let near = integrate_range(&|t: f64| THETA_SQRT_CONSTANT * t.sqrt() * dg(t).abs(), p, THETA_SQRT_RANGE_END);
        let far = integrate_to_infinity(&|t: f64| t * dg(t).abs(), THETA_SQRT_RANGE_END);
        // 2% headroom for the finite-difference derivative and the quadrature.
        let bound = 1.02 * (near + far) + 1e-15 * main.abs();
        (main, bound)
    }

    pub(crate) fn z_cached(&self, s: f64, compute: impl FnOnce() -> EulerValue) -> EulerValue {
        if let Some(v) = self.z_cache.lock().expect("cache lock").get(&s.to_bits()) {
            return *v;
        }
        let v = compute();
        self.z_cache.lock().expect("cache lock").insert(s.to_bits(), v);
        v
    }
}

fn gauss_legendre_16() -> &'static ([f64; 16], [f64; 16]) {
    static NODES: OnceLock<([f64; 16], [f64; 16])> = OnceLock::new();
    NODES.get_or_init(|| {
        const N: usize = 16;
        let mut x = [0.0; N];
        let mut w = [0.0; N];
        for i in 0..N {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (N as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=N {
                    let k = k as f64;
                    (p0, p1) = (p1, ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k);
                }
                let dp = N as f64 * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    let (mut p0, mut p1) = (1.0, z);
                    for k in 2..=N {
                        let k = k as f64;
                        (p0, p1) = (p1, ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k);
                    }
                    let dp = N as f64 * (z * p1 - p0) / (z * z - 1.0);
                    x[i] = z;
                    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
                    break;
                }
            }
        }
        (x, w)
    })
}

// ∫ over u ∈ [u0, u1] of f(from · e^u) from e^u du, one GL16 panel.
fn panel<F: Fn(f64) -> f64>(f: &F, from: f64, u0: f64, u1: f64) -> f64 {
    let (x, w) = gauss_legendre_16();
    let half = 0.5 * (u1 - u0);
    let mid = 0.5 * (u1 + u0);
    let mut acc = CompensatedSum::new();
    for (xi, wi) in x.iter().zip(w) {
        let u = mid + half * xi;
        let t = from * u.exp();
        acc += wi * f(t) * t;
    }
    acc.value() * half
}

/// `∫_from^∞ f(t) dt` for smooth `f` decaying at least like `t^{-1-ε}`.
pub(crate) fn integrate_to_infinity<F: Fn(f64) -> f64>(f: &F, from: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    let mut u = 0.0;
    let u_max = (1e300 / from).ln();
    while u < u_max {
        let piece = panel(f, from, u, u + 1.0);
        acc += piece;
        u += 1.0;
        if u > 8.0 && piece.abs() <= 1e-18 * acc.value().abs() {
            break;
        }
    }
    acc.value()
}

/// `∫_from^to f(t) dt` on a logarithmic grid of unit panels.
pub(crate) fn integrate_range<F: Fn(f64) -> f64>(f: &F, from: f64, to: f64) -> f64 {
    let total = (to / from).ln();
    if total <= 0.0 {
        return 0.0;
    }
    let panels = total.ceil().max(1.0) as usize;
    let width = total / panels as f64;
    let mut acc = CompensatedSum::new();
    for k in 0..panels {
        acc += panel(f, from, k as f64 * width, (k + 1) as f64 * width);
    }
    acc.value()
}
