//! Thermodynamics of Bose gases with a one-particle spectral gap.
//!
//! Reduced units throughout: `ħ²/2m = 1`, `k_B = 1`.

pub mod bounds;
pub mod error;
pub mod finite_volume;
pub mod meanfield;
pub mod perfect;
pub mod potentials;
pub mod quad;
pub mod roots;
pub mod selftest;
pub mod special;

pub use error::{Error, Result};
