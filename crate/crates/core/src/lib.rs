//! Statevector simulation of data re-uploading quantum models.
//!
//! The crate builds layered circuits `U(x) = Π F(x, β) V(θ)`, evaluates them as
//! expectation values, recovers their Fourier coefficients, trains them by
//! gradient descent, and compares Trotter-Suzuki product formulas against
//! exact evolution.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod datasets;
pub mod error;
pub mod fourier;
pub mod hamiltonian;
pub mod model;
pub mod sim;
pub mod training;

pub use error::{Error, Result};
pub use model::{ModelConfig, ParameterSet, Readout};
pub use sim::{Gate, Observable, Pauli, PauliString, StateVector};
