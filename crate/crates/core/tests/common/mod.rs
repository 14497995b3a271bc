//! Independent reference implementations used by the integration tests.
//! Everything here is plain trial division and double loops, sharing no code
//! with the library beyond its public types.

#![allow(dead_code)]

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn lambda(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    match trial_factor(n).as_slice() {
        [(p, _)] => (*p as f64).ln(),
        _ => 0.0,
    }
}

pub fn phi(n: u64) -> u64 {
    trial_factor(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// `Λ(n)` for `0 ≤ n ≤ x` from a plain sieve of Eratosthenes.
pub fn lambda_table(x: u64) -> Vec<f64> {
    let len = x as usize + 1;
    let mut composite = vec![false; len];
    let mut out = vec![0.0; len];
    for p in 2..len {
        if composite[p] {
            continue;
        }
        for m in (p * p..len).step_by(p) {
            composite[m] = true;
        }
        let log_p = (p as f64).ln();
        let mut pk = p;
        while pk < len {
            out[pk] = log_p;
            match pk.checked_mul(p) {
                Some(next) => pk = next,
                None => break,
            }
        }
    }
    out
}

/// `ψ*(x; q, a)` from a Λ-table.
pub fn psi_star(lambdas: &[f64], q: u64, a: i64) -> f64 {
    let x = lambdas.len() as u64 - 1;
    let r = a.rem_euclid(q as i64) as u64;
    let mut total = 0.0;
    let mut n = if r == 0 { q } else { r };
    while n <= x {
        if n as i64 != a {
            total += lambdas[n as usize];
        }
        n += q;
    }
    total
}

/// `M₁(x, N; a)` by the double loop over `q` and `n`.
pub fn naive_m1(x: u64, n_param: f64, a: i64) -> f64 {
    let lambdas = lambda_table(x);
    let q_max = (x as f64 / n_param).floor() as u64;
    let mut total = 0.0;
    for q in 1..=q_max {
        if gcd(q, a.unsigned_abs()) != 1 {
            continue;
        }
        total += psi_star(&lambdas, q, a) - x as f64 / phi(q) as f64;
    }
    total
}

/// Divisors of `m` by trial division up to `√m`.
pub fn divisors(m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            if d * d != m {
                out.push(m / d);
            }
        }
        d += 1;
    }
    out
}

/// Pair-by-pair account of the switch `n = a + qr` behind the two forms of
/// `Σ_{x/N<q≤x, (q,a)=1} ψ*(x; q, a)`.
#[derive(Debug, Default)]
pub struct SwitchLedger {
    /// Weight of pairs with `x/N < q ≤ x`, `(q, a) = 1`.
    pub q_side: f64,
    /// Weight of pairs with `r < N − aN/x`, `(r, a) = 1`, `q > x/N`.
    pub r_side: f64,
    /// Pairs counted on exactly one side because only one of `q`, `r` is coprime to `a`.
    pub coprimality: f64,
    /// Pairs counted on exactly one side for range reasons (`q > x`, or the `r` bound).
    pub boundary: f64,
}

pub fn switch_ledger(x: u64, n_param: f64, a: i64) -> SwitchLedger {
    let lambdas = lambda_table(x);
    let xf = x as f64;
    let q_min = xf / n_param;
    let r_bound = n_param - a as f64 * n_param / xf;
    let abs_a = a.unsigned_abs();
    let mut out = SwitchLedger::default();
    for n in 1..=x {
        let w = lambdas[n as usize];
        if w == 0.0 || n as i64 == a || (n as i64) < a {
            continue;
        }
        let m = (n as i64 - a) as u64;
        for q in divisors(m) {
            let r = m / q;
            let q_in = (q as f64) > q_min && q <= x && gcd(q, abs_a) == 1;
            let r_in = (r as f64) < r_bound && (q as f64) > q_min && gcd(r, abs_a) == 1;
            if q_in {
                out.q_side += w;
            }
            if r_in {
                out.r_side += w;
            }
            if q_in != r_in {
                let ranges_agree = ((q as f64) > q_min && q <= x) == ((r as f64) < r_bound && (q as f64) > q_min);
                let signed = if q_in { w } else { -w };
                if ranges_agree {
                    out.coprimality += signed;
                } else {
                    out.boundary += signed;
                }
            }
        }
    }
    out
}

/// Least-squares slope of `ys` against `xs`.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

/// `ζ(2) ζ(3) / ζ(6)` from the closed forms and Apéry's constant.
pub fn c11_closed_form() -> f64 {
    let pi = std::f64::consts::PI;
    let zeta3 = 1.202_056_903_159_594_3;
    (pi * pi / 6.0) * zeta3 / (pi.powi(6) / 945.0)
}

/// `Σ_{k≥0} χ(2k+1)(2k+1)^{-s}` for `χ₋₄` by repeated averaging of the
/// alternating partial sums.
pub fn dirichlet_beta(s: f64) -> f64 {
    let terms = 64;
    let mut partial = Vec::with_capacity(terms);
    let mut acc = 0.0;
    for k in 0..terms {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * ((2 * k + 1) as f64).powf(-s);
        partial.push(acc);
    }
    while partial.len() > 1 {
        partial = partial.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    }
    partial[0]
}

/// PASS/FAIL bookkeeping for the acceptance suite.
#[derive(Default)]
pub struct Report {
    failures: Vec<String>,
}

impl Report {
    pub fn check(&mut self, criterion: &str, pass: bool, detail: String) {
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {criterion}: {detail}");
        if !pass {
            self.failures.push(format!("{criterion}: {detail}"));
        }
    }

    pub fn note(&self, criterion: &str, detail: String) {
        println!("       criterion {criterion}: {detail}");
    }

    pub fn finish(self) {
        assert!(self.failures.is_empty(), "failed checks:\n{}", self.failures.join("\n"));
    }
}
