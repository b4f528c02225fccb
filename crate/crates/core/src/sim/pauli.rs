use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> DMatrix<Complex64> {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::i();
        let entries = match self {
            Pauli::I => [l, o, o, l],
            Pauli::X => [o, l, l, o],
            Pauli::Y => [o, -i, i, o],
            Pauli::Z => [l, o, o, -l],
        };
        DMatrix::from_row_slice(2, 2, &entries)
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A tensor product of single-qubit Paulis; letter `k` acts on qubit `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self(letters)
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self(vec![Pauli::I; n_qubits])
    }

    /// A string with `pauli` on `qubit` and identity elsewhere.
    pub fn single(n_qubits: usize, qubit: usize, pauli: Pauli) -> Self {
        let mut letters = vec![Pauli::I; n_qubits];
        letters[qubit] = pauli;
        Self(letters)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.0
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&p| p != Pauli::I).count()
    }

    /// Two Pauli strings commute iff they anticommute on an even number of sites.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let clashes = self
            .0
            .iter()
            .zip(&other.0)
            .filter(|(&a, &b)| a != Pauli::I && b != Pauli::I && a != b)
            .count();
        clashes % 2 == 0
    }

    /// Dense `2^n x 2^n` matrix, qubit 0 as the leftmost Kronecker factor.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        self.0
            .iter()
            .fold(DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)), |acc, p| {
                acc.kronecker(&p.matrix())
            })
    }

    /// `(flip_mask, z_mask, y_count)` such that
    /// `P|k⟩ = i^{y_count} (-1)^{popcount(k & z_mask)} |k ^ flip_mask⟩`.
    pub(crate) fn masks(&self) -> (usize, usize, u32) {
        let n = self.0.len();
        let mut flip = 0;
        let mut zmask = 0;
        let mut ys = 0;
        for (q, p) in self.0.iter().enumerate() {
            let bit = 1 << (n - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => flip |= bit,
                Pauli::Y => {
                    flip |= bit;
                    zmask |= bit;
                    ys += 1;
                }
                Pauli::Z => zmask |= bit,
            }
        }
        (flip, zmask, ys)
    }

    /// `⟨ψ|P|ψ⟩` for a raw amplitude vector; complex in general, real for
    /// normalized or unnormalized vectors alike since `P` is Hermitian.
    pub fn expectation_complex(&self, amps: &[Complex64]) -> Complex64 {
        let (flip, zmask, ys) = self.masks();
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, a) in amps.iter().enumerate() {
            let sign = if (k & zmask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            acc += amps[k ^ flip].conj() * a * sign;
        }
        acc * Complex64::i().powu(ys)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::Argument("empty Pauli string".into()));
        }
        s.chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::Argument(format!("invalid Pauli letter '{other}'"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(PauliString)
    }
}
