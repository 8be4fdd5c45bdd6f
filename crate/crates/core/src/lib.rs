//! Phase-space description of the resonant Jaynes–Cummings model.
//!
//! A qubit coupled to a single bosonic mode is mapped to a real function on
//! the sphere times the plane through a hybrid Stratonovich–Weyl kernel.
//! Closed-form dynamics are cross-checked against dense truncated matrices.

pub mod cli;
pub mod error;
pub mod hilbert;
pub mod jc;
pub mod kernels;
pub mod numerics;
pub mod observables;
pub mod oracle;
pub mod wigner;

pub use error::{Error, Result};
