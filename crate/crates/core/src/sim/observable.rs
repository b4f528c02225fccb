use nalgebra::DMatrix;
use num_complex::Complex64;

use super::pauli::{Pauli, PauliString};
use crate::error::{argument, Result};

/// A real-weighted sum of Pauli strings, `O = Σ_p α_p P_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    n_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl Observable {
    pub fn new(terms: Vec<(f64, PauliString)>) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return argument("observable needs at least one term");
        };
        let n_qubits = first.len();
        if let Some((_, bad)) = terms.iter().find(|(_, p)| p.len() != n_qubits) {
            return argument(format!("Pauli string {bad} does not act on {n_qubits} qubits"));
        }
        if let Some((w, _)) = terms.iter().find(|(w, _)| !w.is_finite()) {
            return argument(format!("non-finite observable weight {w}"));
        }
        Ok(Self { n_qubits, terms })
    }

    /// `Z` on one qubit; the default readout.
    pub fn z(n_qubits: usize, qubit: usize) -> Self {
        Self {
            n_qubits,
            terms: vec![(1.0, PauliString::single(n_qubits, qubit, Pauli::Z))],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    /// Keeps only terms with at most `k` non-identity letters.
    pub fn low_weight(&self, k: usize) -> Self {
        Self {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().filter(|(_, p)| p.weight() <= k).cloned().collect(),
        }
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        let dim = 1 << self.n_qubits;
        self.terms.iter().fold(DMatrix::zeros(dim, dim), |acc, (w, p)| {
            acc + p.matrix() * Complex64::new(*w, 0.0)
        })
    }

    /// `Σ_p α_p ⟨ψ|P_p|ψ⟩` on a raw amplitude vector, before discarding the
    /// imaginary residue.
    pub fn expectation_complex(&self, amps: &[Complex64]) -> Complex64 {
        self.terms.iter().map(|(w, p)| p.expectation_complex(amps) * *w).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_mismatched_strings() {
        let terms = vec![(1.0, "ZI".parse().unwrap()), (0.5, "X".parse().unwrap())];
        assert!(Observable::new(terms).is_err());
        assert!(Observable::new(vec![]).is_err());
    }

    #[test]
    fn low_weight_truncation() {
        let obs = Observable::new(vec![
            (1.0, "ZII".parse().unwrap()),
            (0.5, "XXI".parse().unwrap()),
            (0.25, "XYZ".parse().unwrap()),
        ])
        .unwrap();
        assert_eq!(obs.low_weight(1).terms().len(), 1);
        assert_eq!(obs.low_weight(2).terms().len(), 2);
        assert_eq!(obs.low_weight(3), obs);
    }

    #[test]
    fn dense_matrix_is_hermitian() {
        let obs = Observable::new(vec![(0.3, "XY".parse().unwrap()), (-1.1, "ZZ".parse().unwrap())]).unwrap();
        let m = obs.matrix();
        assert!((m.adjoint() - &m).iter().all(|z| z.norm() < 1e-15));
    }
}
