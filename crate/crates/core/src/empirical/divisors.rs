//! Titchmarsh-style accumulation: every prime power `n ≤ x`, `n ≠ a`, is
//! visited together with the divisors `q ≤ L` of `n − a` that are coprime to
//! `a`. Summing `Λ(n)` over those pairs gives `Σ_{q≤L, (q,a)=1} ψ*(x; q, a)`.

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::sieve::{base_primes, factorize, isqrt, prime_divisors, Sieve};

/// Largest `x` the divisor engine accepts (`2^62`), so that `n − a` fits.
pub const MAX_X: u64 = 1 << 62;

const NO_SLOT: u32 = u32::MAX;
/// A `u64` has at most 15 distinct prime factors.
const MAX_FACTORS: usize = 15;

#[derive(Clone, Copy)]
struct Slot {
    remaining: u64,
    count: u8,
    primes: [u64; MAX_FACTORS],
    exponents: [u8; MAX_FACTORS],
}

impl Slot {
    fn new(m: u64) -> Self {
        Self { remaining: m, count: 0, primes: [0; MAX_FACTORS], exponents: [0; MAX_FACTORS] }
    }

    fn push(&mut self, p: u64, e: u8) {
        self.primes[self.count as usize] = p;
        self.exponents[self.count as usize] = e;
        self.count += 1;
    }

    fn factors(&self) -> impl Iterator<Item = (u64, u8)> + '_ {
        self.primes[..self.count as usize].iter().copied().zip(self.exponents[..self.count as usize].iter().copied())
    }
}

/// Appends to `out` every divisor `≤ limit` of `Π p^e`.
fn divisors_upto(factors: impl Iterator<Item = (u64, u8)>, limit: u64, out: &mut Vec<u64>) {
    out.clear();
    out.push(1);
    for (p, e) in factors {
        let existing = out.len();
        for i in 0..existing {
            let mut d = out[i];
            for _ in 0..e {
                match d.checked_mul(p) {
                    Some(next) if next <= limit => {
                        d = next;
                        out.push(d);
                    }
                    _ => break,
                }
            }
        }
    }
}

/// Configuration of one sweep over `n ≤ x`.
#[derive(Debug, Clone)]
pub(crate) struct DivisorSweep {
    x: u64,
    a: i64,
    limit: u64,
    a_primes: Vec<u64>,
    sieve: Sieve,
}

impl DivisorSweep {
    pub(crate) fn new(x: u64, a: i64, limit: u64) -> Result<Self> {
        if x > MAX_X {
            return invalid(format!("x = {x} exceeds 2^62"));
        }
        if a == 0 {
            return invalid("residue class a must be nonzero");
        }
        if a.unsigned_abs() > MAX_X {
            return invalid(format!("|a| = {} exceeds 2^62", a.unsigned_abs()));
        }
        Ok(Self { x, a, limit, a_primes: prime_divisors(a.unsigned_abs())?, sieve: Sieve::default() })
    }

    #[cfg(test)]
    pub(crate) fn with_segment_size(mut self, size: u64) -> Self {
        self.sieve = Sieve::with_segment_size(size).expect("positive segment size");
        self
    }

    fn coprime_to_a(&self, p: u64) -> bool {
        !self.a_primes.contains(&p)
    }

    /// Runs `visit(acc, n, Λ(n), divisors)` over all segments. Each segment
    /// folds into its own accumulator; accumulators are merged in segment
    /// order, so the result does not depend on the thread count.
    pub(crate) fn run<A, I, V, M>(&self, init: I, visit: V, merge: M) -> Result<A>
    where
        A: Send,
        I: Fn() -> A + Sync,
        V: Fn(&mut A, u64, f64, &[u64]) + Sync,
        M: Fn(&mut A, A),
    {
        let mut total = init();
        if self.x < 2 || self.limit == 0 {
            return Ok(total);
        }
        let segments = self.sieve.segments(1, self.x + 1);
        let batch = rayon::current_num_threads().max(1);
        for group in segments.chunks(batch) {
            let parts: Vec<Result<A>> = group
                .par_iter()
                .map(|&(lo, hi)| {
                    let mut acc = init();
                    self.segment(lo, hi, &mut acc, &visit)?;
                    Ok(acc)
                })
                .collect();
            for part in parts {
                merge(&mut total, part?);
            }
        }
        Ok(total)
    }

    fn segment<A, V>(&self, lo: u64, hi: u64, acc: &mut A, visit: &V) -> Result<()>
    where
        V: Fn(&mut A, u64, f64, &[u64]),
    {
        let entries = self.sieve.lambda_range(lo, hi)?.entries;
        let a = self.a;
        let mut divisors = Vec::new();
        // n < a: factor a − n directly.
        let split = if a > 0 { entries.partition_point(|e| e.n <= a as u64) } else { 0 };
        for e in &entries[..split] {
            if e.n == a as u64 {
                continue;
            }
            let factors = factorize(a as u64 - e.n)?;
            let kept = factors.into_iter().filter(|&(p, _)| self.coprime_to_a(p)).map(|(p, k)| (p, k as u8));
            divisors_upto(kept, self.limit, &mut divisors);
            visit(acc, e.n, e.value, &divisors);
        }
        let upper = &entries[split..];
        if upper.is_empty() {
            return Ok(());
        }
        // m = n − a > 0 for the remaining entries; sieve their factorizations.
        let shift = |n: u64| -> u64 { (n as i128 - a as i128) as u64 };
        let m_lo = shift(upper[0].n);
        let m_hi = shift(upper[upper.len() - 1].n);
        let mut map = vec![NO_SLOT; (m_hi - m_lo + 1) as usize];
        let mut slots: Vec<Slot> = Vec::with_capacity(upper.len());
        for (i, e) in upper.iter().enumerate() {
            let m = shift(e.n);
            map[(m - m_lo) as usize] = i as u32;
            slots.push(Slot::new(m));
        }
        let root = isqrt(m_hi);
        let base = base_primes();
        let sieving = &base[..base.partition_point(|&p| p <= root)];
        for &p in sieving {
            let keep = self.coprime_to_a(p);
            let mut k = m_lo.div_ceil(p) * p;
            while k <= m_hi {
                let slot_id = map[(k - m_lo) as usize];
                if slot_id != NO_SLOT {
                    let slot = &mut slots[slot_id as usize];
                    let mut e = 0u8;
                    while slot.remaining % p == 0 {
                        slot.remaining /= p;
                        e += 1;
                    }
                    if keep {
                        slot.push(p, e);
                    }
                }
                k += p;
            }
        }
        let incomplete = sieving.len() == base.len() && base.last().is_some_and(|&b| b < root);
        for (e, slot) in upper.iter().zip(&slots) {
            let mut slot = *slot;
            if slot.remaining > 1 {
                if incomplete {
                    // Base primes exhausted before √m: finish by factorization.
                    for (p, k) in factorize(slot.remaining)? {
                        if self.coprime_to_a(p) {
                            slot.push(p, k as u8);
                        }
                    }
                } else if self.coprime_to_a(slot.remaining) {
                    slot.push(slot.remaining, 1);
                }
            }
            divisors_upto(slot.factors(), self.limit, &mut divisors);
            visit(acc, e.n, e.value, &divisors);
        }
        Ok(())
    }
}
