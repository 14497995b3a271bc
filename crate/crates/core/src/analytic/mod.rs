//! Analytic side: zeta values, Euler products, bias constants and the Mellin
//! integrals that produce the predicted main terms.

pub mod constants;
pub mod euler;
pub mod mellin;
pub mod zeta;

pub use constants::{
    big_g, big_z, c0, c_aq, d_aq, mu, mu_tilde, BiasPrediction, ResidueShape, ERROR_EXPONENT, EULER_GAMMA,
};
pub use mellin::{d_gamma, d_one_exact, f_eval, j_gamma_direct, j_tilde, phi_mean, r_remainder};
pub use euler::{EulerEngine, EulerValue, DEFAULT_CUTOFF};
pub use zeta::{zeta_real, EulerMaclaurin};
