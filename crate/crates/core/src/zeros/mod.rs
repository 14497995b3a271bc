//! Real quadratic characters, real zeros of their L-functions, and the
//! predictions attached to a hypothetical exceptional zero.

pub mod character;
pub mod scan;
pub mod scenario;

pub use character::{is_fundamental, kronecker, l_real, QuadraticCharacter};
pub use scan::{exceptional_scan, largest_root_on_grid, max_real_zero};
pub use scenario::{
    eta, predict_with, predict_with_scenario, unconditional_bound, EtaValue, ExceptionalScenario, Prediction,
    PredictionBranch,
};
