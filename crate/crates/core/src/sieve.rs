//! Segmented generation of primes, prime powers with their von Mangoldt
//! weights, Euler totients and 64-bit factorizations.

use std::sync::OnceLock;

use crate::error::{invalid, Result};

/// Largest integer accepted anywhere in the sieve (`2^63 - 1`).
pub const MAX_N: u64 = i64::MAX as u64;

/// Default number of integers covered by one sieve segment.
pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 22;

/// Base primes are cached up to this bound. Ranges whose square root exceeds
/// it are sieved with the cached primes and the survivors confirmed by a
/// deterministic Miller-Rabin test.
const BASE_LIMIT: u64 = 1 << 21;

/// A prime power `n = p^k` together with `Λ(n) = log p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaEntry {
    pub n: u64,
    pub value: f64,
}

/// All prime powers of the half-open range `[lo, hi)`, sorted by `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SieveSegment {
    pub lo: u64,
    pub hi: u64,
    pub entries: Vec<LambdaEntry>,
}

impl SieveSegment {
    /// Compensated sum of the Λ-values in the segment.
    pub fn lambda_sum(&self) -> f64 {
        crate::sum::csum(self.entries.iter().map(|e| e.value))
    }
}

/// Primes `<= limit` by a plain sieve of Eratosthenes.
pub fn primes_upto(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::with_capacity(estimate_prime_count(limit));
    let mut i = 2usize;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    for (k, &c) in composite.iter().enumerate().skip(2) {
        if !c {
            out.push(k as u64);
        }
    }
    out
}

fn estimate_prime_count(limit: u64) -> usize {
    let x = limit.max(10) as f64;
    (1.26 * x / x.ln()) as usize + 16
}

pub(crate) fn base_primes() -> &'static [u64] {
    static BASE: OnceLock<Vec<u64>> = OnceLock::new();
    BASE.get_or_init(|| primes_upto(BASE_LIMIT))
}

/// Segmented von Mangoldt sieve.
#[derive(Debug, Clone, Copy)]
pub struct Sieve {
    segment_size: u64,
}

impl Default for Sieve {
    fn default() -> Self {
        Self { segment_size: DEFAULT_SEGMENT_SIZE }
    }
}

impl Sieve {
    pub fn with_segment_size(segment_size: u64) -> Result<Self> {
        if segment_size == 0 {
            return invalid("segment size must be positive");
        }
        Ok(Self { segment_size })
    }

    pub fn segment_size(&self) -> u64 {
        self.segment_size
    }

    /// All `n` in `[lo, hi)` with `Λ(n) != 0`.
    pub fn lambda_range(&self, lo: u64, hi: u64) -> Result<SieveSegment> {
        if lo == 0 || lo > hi || hi > MAX_N {
            return invalid(format!("range [{lo}, {hi}) outside 1 <= lo <= hi <= 2^63-1"));
        }
        if hi - lo > self.segment_size {
            return invalid(format!(
                "range length {} exceeds the segment size {}",
                hi - lo,
                self.segment_size
            ));
        }
        Ok(sieve_segment(lo, hi))
    }

    /// Splits `[lo, hi)` into consecutive segments of at most the configured size.
    pub fn segments(&self, lo: u64, hi: u64) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let mut start = lo;
        while start < hi {
            let end = hi.min(start.saturating_add(self.segment_size));
            out.push((start, end));
            start = end;
        }
        out
    }
}

/// [`Sieve::lambda_range`] with the default segment size.
pub fn lambda_range(lo: u64, hi: u64) -> Result<SieveSegment> {
    Sieve::default().lambda_range(lo, hi)
}

fn sieve_segment(lo: u64, hi: u64) -> SieveSegment {
    let mut entries = Vec::new();
    if hi <= 2 {
        return SieveSegment { lo, hi, entries };
    }
    let root = isqrt(hi - 1);
    let base = base_primes();
    let sieving: &[u64] = &base[..base.partition_point(|&p| p <= root)];
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    for &p in sieving {
        let first = (p * p).max(lo.div_ceil(p) * p);
        let mut m = first;
        while m < hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    let needs_confirmation = root > BASE_LIMIT;
    let start = lo.max(2);
    for n in start..hi {
        if !composite[(n - lo) as usize] && (!needs_confirmation || is_prime(n)) {
            entries.push(LambdaEntry { n, value: (n as f64).ln() });
        }
    }
    // Proper prime powers p^k, k >= 2.
    for &p in sieving {
        let logp = (p as f64).ln();
        let Some(mut pk) = p.checked_mul(p) else { break };
        while pk < hi {
            if pk >= lo {
                entries.push(LambdaEntry { n: pk, value: logp });
            }
            match pk.checked_mul(p) {
                Some(next) => pk = next,
                None => break,
            }
        }
    }
    if needs_confirmation {
        for k in 2..64u32 {
            let pmax = iroot(hi - 1, k);
            if pmax <= BASE_LIMIT {
                break;
            }
            let mut p = iroot(lo - 1, k) + 1;
            p = p.max(BASE_LIMIT + 1);
            while p <= pmax {
                if is_prime(p) {
                    entries.push(LambdaEntry { n: p.pow(k), value: (p as f64).ln() });
                }
                p += 1;
            }
        }
    }
    entries.sort_unstable_by_key(|e| e.n);
    SieveSegment { lo, hi, entries }
}

/// `floor(sqrt(n))`.
pub fn isqrt(n: u64) -> u64 {
    iroot(n, 2)
}

/// `floor(n^(1/k))` for `k >= 1`.
pub fn iroot(n: u64, k: u32) -> u64 {
    if k == 1 || n < 2 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / k as f64) as u64;
    while r > 0 && pow_exceeds(r, k, n) {
        r -= 1;
    }
    while !pow_exceeds(r + 1, k, n) {
        r += 1;
    }
    r
}

fn pow_exceeds(base: u64, k: u32, n: u64) -> bool {
    match base.checked_pow(k) {
        Some(v) => v > n,
        None => true,
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for 64-bit integers (Miller-Rabin with the
/// first twelve prime bases).
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut y = pow_mod(a, d, n);
        if y == 1 || y == n - 1 {
            continue;
        }
        for _ in 1..s {
            y = mul_mod(y, y, n);
            if y == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// Brent's variant of Pollard's rho; `n` must be odd and composite.
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |v: u64| (mul_mod(v, v, n) + c) % n;
        let (mut x, mut y, mut g, mut q) = (2u64, 2u64, 1u64, 1u64);
        let mut r = 1u64;
        let mut ys = y;
        const M: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..M.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += M;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Sorted prime factorization `[(p, e), ...]` of `1 <= n <= 2^63 - 1`.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 || n > MAX_N {
        return invalid(format!("cannot factorize {n}"));
    }
    let mut primes = Vec::new();
    let mut rem = n;
    for &p in base_primes().iter().take_while(|&&p| p < 1000) {
        if p * p > rem {
            break;
        }
        while rem % p == 0 {
            primes.push(p);
            rem /= p;
        }
    }
    split_cofactor(rem, &mut primes);
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

fn split_cofactor(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    if n % 2 == 0 {
        out.push(2);
        split_cofactor(n / 2, out);
        return;
    }
    let d = pollard_brent(n);
    split_cofactor(d, out);
    split_cofactor(n / d, out);
}

/// Distinct prime divisors of `n >= 1`.
pub fn prime_divisors(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.into_iter().map(|(p, _)| p).collect())
}

/// Euler's totient `φ(n)`.
pub fn euler_phi(n: u64) -> Result<u64> {
    if n == 0 {
        return invalid("φ(0) is undefined");
    }
    Ok(factorize(n)?
        .into_iter()
        .fold(1u64, |acc, (p, e)| acc * (p - 1) * p.pow(e - 1)))
}

/// `Λ(n)` for a single integer.
pub fn von_mangoldt(n: u64) -> Result<f64> {
    let f = factorize(n)?;
    Ok(match f.as_slice() {
        [(p, _)] => (*p as f64).ln(),
        _ => 0.0,
    })
}

/// Table of `φ(0..=n)` (with `φ(0)` stored as 0).
pub fn totients_upto(n: u64) -> Vec<u32> {
    assert!(n < u32::MAX as u64, "totient table limit {n} exceeds u32 range");
    let len = n as usize + 1;
    let mut phi: Vec<u32> = (0..len as u32).collect();
    for p in 2..len {
        if phi[p] == p as u32 {
            let mut m = p;
            while m < len {
                phi[m] -= phi[m] / p as u32;
                m += p;
            }
        }
    }
    phi
}
