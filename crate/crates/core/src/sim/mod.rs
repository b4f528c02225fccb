//! Dense statevector simulator.

mod gate;
mod observable;
mod pauli;
mod state;

pub use gate::{apply_controlled_matrix2, apply_matrix2, apply_to_amplitudes, rx, ry, rz, Gate, Matrix2};
pub use observable::Observable;
pub use pauli::{Pauli, PauliString};
pub use state::{StateVector, MAX_QUBITS};
