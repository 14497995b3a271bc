//! Numerical laboratory for the first moment of primes in arithmetic
//! progressions: empirical `M₁(x, N; a)` by divisor iteration, the analytic
//! main terms it is compared against, and hypothetical exceptional-zero
//! corrections.

pub mod analytic;
pub mod empirical;
pub mod error;
pub mod sieve;
pub mod sum;
pub mod zeros;

pub use error::{Error, Result};
