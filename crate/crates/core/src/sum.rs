//! Compensated (Neumaier) accumulation.
//!
//! Every long reduction in the crate goes through [`CompensatedSum`]. Partial
//! sums can be merged with `+`, which keeps both compensation terms, so a
//! segment-wise reduction followed by an ordered merge loses nothing compared
//! to a single sequential pass.

use std::iter::Sum;
use std::ops::{Add, AddAssign};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub const fn new() -> Self {
        Self { sum: 0.0, compensation: 0.0 }
    }

    #[inline]
    pub fn push(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl From<f64> for CompensatedSum {
    fn from(value: f64) -> Self {
        Self { sum: value, compensation: 0.0 }
    }
}

impl AddAssign<f64> for CompensatedSum {
    #[inline]
    fn add_assign(&mut self, rhs: f64) {
        self.push(rhs);
    }
}

impl AddAssign for CompensatedSum {
    fn add_assign(&mut self, rhs: Self) {
        self.push(rhs.sum);
        self.push(rhs.compensation);
    }
}

impl Add for CompensatedSum {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl Sum<f64> for CompensatedSum {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.push(v);
        }
        acc
    }
}

/// Compensated sum of an iterator of floats.
pub fn csum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().sum::<CompensatedSum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_next_to_large_ones() {
        let mut s = CompensatedSum::new();
        s += 1e100;
        s += 1.0;
        s += -1e100;
        assert_eq!(s.value(), 1.0);
    }

    #[test]
    fn merge_matches_sequential() {
        let values: Vec<f64> = (1..=10_000).map(|k| 1.0 / k as f64).collect();
        let seq = csum(values.iter().copied());
        let (l, r) = values.split_at(3_333);
        let merged = l.iter().copied().sum::<CompensatedSum>() + r.iter().copied().sum::<CompensatedSum>();
        assert!((seq - merged.value()).abs() <= 1e-15 * seq);
    }

    #[test]
    fn harmonic_sum_beats_naive() {
        // 0.1 is not representable; ten million copies drift under naive summation.
        let n = 10_000_000;
        let naive: f64 = (0..n).map(|_| 0.1).sum();
        let comp = csum((0..n).map(|_| 0.1));
        assert!((comp - 1e6).abs() < (naive - 1e6).abs());
        assert!((comp - 1e6).abs() < 1e-9);
    }
}
