use crate::error::{invalid, Result};
use crate::sieve::{von_mangoldt, LambdaEntry, Sieve};
use crate::sum::CompensatedSum;

/// Below this many candidates, `ψ` tests each `n ≡ a (mod q)` individually.
const DIRECT_CANDIDATES: u64 = 1 << 14;

/// Largest `x` for which [`prime_powers_upto`] materializes the full list.
pub const MAX_MATERIALIZED_X: u64 = 1 << 32;

/// Every prime power `≤ x`, sorted.
pub fn prime_powers_upto(x: u64) -> Result<Vec<LambdaEntry>> {
    if x > MAX_MATERIALIZED_X {
        return invalid(format!("refusing to materialize all prime powers up to {x}"));
    }
    let sieve = Sieve::default();
    let mut out = Vec::new();
    for (lo, hi) in sieve.segments(1, x + 1) {
        out.extend(sieve.lambda_range(lo, hi)?.entries);
    }
    Ok(out)
}

fn floor_x(x: f64) -> Result<Option<u64>> {
    if !(x >= 0.0) || !x.is_finite() {
        return invalid(format!("x must be a finite real >= 0, got {x}"));
    }
    Ok(if x < 1.0 { None } else { Some(x.floor() as u64) })
}

/// `ψ(x; q, a) = Σ_{n≤x, n≡a (q)} Λ(n)`.
pub fn psi(x: f64, q: u64, a: i64) -> Result<f64> {
    if q == 0 {
        return invalid("modulus q must be positive");
    }
    let Some(xf) = floor_x(x)? else { return Ok(0.0) };
    let residue = a.rem_euclid(q as i64) as u64;
    let first = if residue == 0 { q } else { residue };
    if first > xf {
        return Ok(0.0);
    }
    let mut acc = CompensatedSum::new();
    if (xf - first) / q < DIRECT_CANDIDATES {
        let mut n = first;
        loop {
            acc += von_mangoldt(n)?;
            match n.checked_add(q) {
                Some(next) if next <= xf => n = next,
                _ => break,
            }
        }
    } else {
        let sieve = Sieve::default();
        for (lo, hi) in sieve.segments(1, xf + 1) {
            for e in sieve.lambda_range(lo, hi)?.entries {
                if e.n % q == residue {
                    acc += e.value;
                }
            }
        }
    }
    Ok(acc.value())
}

/// `ψ*(x; q, a)`: `ψ(x; q, a)` without the term `n = a`.
pub fn psi_star(x: f64, q: u64, a: i64) -> Result<f64> {
    let total = psi(x, q, a)?;
    if a >= 1 && a as f64 <= x {
        return Ok(total - von_mangoldt(a as u64)?);
    }
    Ok(total)
}

/// `ψ*(y; r, a)` over a materialized prime-power list; `y` may be below the list's range end.
pub(crate) fn psi_star_from(entries: &[LambdaEntry], y: f64, r: u64, a: i64) -> f64 {
    let residue = a.rem_euclid(r as i64) as u64;
    let end = entries.partition_point(|e| (e.n as f64) <= y);
    let mut acc = CompensatedSum::new();
    for e in &entries[..end] {
        if e.n % r == residue && e.n as i64 != a {
            acc += e.value;
        }
    }
    acc.value()
}
