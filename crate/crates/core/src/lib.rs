//! Spectral solvers for the anisotropic quantum Rabi-Stark model.
//!
//! * [`boa`]: displaced-oscillator coefficients and the G-function, |U| < 1.
//! * [`spectrum`]: pole ladder, level finding, first-order crossings.
//! * [`ed`]: truncated Fock-space diagonalisation used as an oracle.
//! * [`u1`]: the |U| = 1 effective-oscillator spectra and gap exponents.

pub mod boa;
pub mod ed;
pub mod error;
pub mod exec;
pub mod model;
pub mod roots;
pub mod spectrum;
pub mod u1;

pub use error::{Error, Result};
pub use exec::Execution;
pub use model::{CouplingFamily, DerivedParams, ModelParams, Parity, Regime, StarkSign};
