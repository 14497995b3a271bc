//! Empirical side: ψ, ψ*, the first moments, their decomposition, divisor
//! switching and the Bombieri-Vinogradov diagnostic.

mod bv;
mod decompose;
mod divisors;
mod moments;
mod params;
mod psi;
mod switch;

pub use bv::{bv_error_sum, bv_grid, BvOptions, BvResidues};
pub use decompose::{decompose, Decomposition, PsiStarTable, DEFAULT_DELTA};
pub use divisors::MAX_X;
pub use moments::{m1z_raw_grid, moment_grid, moment_grid_with, moment_m1, moment_m1z, MomentReport};
pub use params::MomentParams;
pub use psi::{prime_powers_upto, psi, psi_star};
pub use switch::divisor_switch_t3;
