use num_complex::Complex64;

use super::gate::{apply_unchecked, Gate};
use super::observable::Observable;
use crate::error::{argument, config, Result};

/// Largest register the dense simulator will allocate.
pub const MAX_QUBITS: usize = 20;

const NORM_TOLERANCE: f64 = 1e-10;

/// A normalized pure state over `2^n` computational basis states.
///
/// Qubit 0 is the most significant bit of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

fn check_qubits(n_qubits: usize) -> Result<()> {
    if !(1..=MAX_QUBITS).contains(&n_qubits) {
        return config(format!(
            "qubit count {n_qubits} outside supported range 1..={MAX_QUBITS}"
        ));
    }
    Ok(())
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return argument(format!("length {len} is not 2^n for n >= 1"));
    }
    let n = len.trailing_zeros() as usize;
    check_qubits(n)?;
    Ok(n)
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    /// Wraps amplitudes that are already normalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amplitudes.len())?;
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return argument(format!("amplitudes have squared norm {norm_sq}, expected 1"));
        }
        Ok(Self { n_qubits, amplitudes })
    }

    /// Amplitude embedding: `data / ‖data‖`.
    pub fn amplitude_embed(data: &[Complex64]) -> Result<Self> {
        let n_qubits = qubits_for_len(data.len())?;
        let norm = data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return argument("cannot embed a zero or non-finite vector");
        }
        Ok(Self {
            n_qubits,
            amplitudes: data.iter().map(|a| a / norm).collect(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Returns the state after `gate`.
    pub fn apply_gate(&self, gate: &Gate) -> Result<Self> {
        let mut out = self.clone();
        out.apply_in_place(gate)?;
        Ok(out)
    }

    pub fn apply_in_place(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        apply_unchecked(&mut self.amplitudes, self.n_qubits, gate);
        Ok(())
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a Gate>) -> Result<()> {
        for g in gates {
            self.apply_in_place(g)?;
        }
        Ok(())
    }

    /// `|amplitude|²` per basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨ψ|O|ψ⟩`.
    pub fn expectation(&self, obs: &Observable) -> Result<f64> {
        if obs.n_qubits() != self.n_qubits {
            return argument(format!(
                "observable acts on {} qubits, state has {}",
                obs.n_qubits(),
                self.n_qubits
            ));
        }
        Ok(obs.expectation_complex(&self.amplitudes).re)
    }
}
