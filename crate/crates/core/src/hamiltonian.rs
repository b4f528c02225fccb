//! Pauli-sum Hamiltonians, exact evolution, and second-order Trotter-Suzuki
//! product formulas. All evolutions use the sign convention `e^{-iHt}`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{argument, config, Error, Result};
use crate::sim::{Matrix2, Pauli, PauliString};

pub const MAX_DENSE_QUBITS: usize = 6;
pub const MAX_TROTTER_STEPS: usize = 1 << 20;

/// `H = Σⱼ cⱼ Pⱼ` with real coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTermSum {
    n_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliTermSum {
    pub fn new(terms: Vec<(f64, PauliString)>) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return argument("Hamiltonian needs at least one term");
        };
        let n_qubits = first.len();
        if terms.iter().any(|(_, p)| p.len() != n_qubits) {
            return argument("Hamiltonian terms act on different qubit counts");
        }
        if terms.iter().any(|(c, _)| !c.is_finite()) {
            return argument("Hamiltonian coefficients must be finite");
        }
        Ok(Self { n_qubits, terms })
    }

    /// Parses lines `coefficient pauli_string`; blank lines and `#` comments
    /// are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (Some(coef), Some(string), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(Error::Data(format!(
                    "line {}: expected 'coefficient pauli_string'",
                    i + 1
                )));
            };
            let coef: f64 = coef
                .parse()
                .map_err(|e| Error::Data(format!("line {}: bad coefficient: {e}", i + 1)))?;
            let string: PauliString = string
                .parse()
                .map_err(|e| Error::Data(format!("line {}: {e}", i + 1)))?;
            terms.push((coef, string));
        }
        Self::new(terms).map_err(|e| Error::Data(e.to_string()))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn all_commute(&self) -> bool {
        self.terms
            .iter()
            .enumerate()
            .all(|(i, (_, a))| self.terms[i + 1..].iter().all(|(_, b)| a.commutes_with(b)))
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        let dim = 1 << self.n_qubits;
        self.terms.iter().fold(DMatrix::zeros(dim, dim), |acc, (c, p)| {
            acc + p.matrix() * Complex64::new(*c, 0.0)
        })
    }

    fn check_dense(&self) -> Result<()> {
        if self.n_qubits > MAX_DENSE_QUBITS {
            return config(format!(
                "dense evolution supports at most {MAX_DENSE_QUBITS} qubits, got {}",
                self.n_qubits
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionResult {
    pub unitary: DMatrix<Complex64>,
    pub t: f64,
    /// Trotter steps; 0 for exact evolution.
    pub r: usize,
}

impl EvolutionResult {
    /// The opposite-sign evolution `e^{+iHt}`.
    pub fn adjoint(&self) -> Self {
        Self {
            unitary: self.unitary.adjoint(),
            t: self.t,
            r: self.r,
        }
    }

    /// `‖U†U − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.unitary.nrows();
        let prod = self.unitary.adjoint() * &self.unitary - DMatrix::identity(n, n);
        prod.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// `(α, β, δ, γ)` with `A = αI + βX + δY + γZ`, each `tr(σA)/2`.
pub fn pauli_decompose_2x2(a: &Matrix2) -> [Complex64; 4] {
    let i = Complex64::i();
    let alpha = (a[0][0] + a[1][1]) / 2.0;
    let beta = (a[0][1] + a[1][0]) / 2.0;
    // tr(YA) = -i·a10 + i·a01
    let delta = (i * a[0][1] - i * a[1][0]) / 2.0;
    let gamma = (a[0][0] - a[1][1]) / 2.0;
    [alpha, beta, delta, gamma]
}

/// `αI + βX + δY + γZ`.
pub fn pauli_recombine(c: &[Complex64; 4]) -> Matrix2 {
    let i = Complex64::i();
    let [alpha, beta, delta, gamma] = *c;
    [[alpha + gamma, beta - i * delta], [beta + i * delta, alpha - gamma]]
}

/// `e^{-iHt}` through the eigendecomposition of the dense Hamiltonian.
pub fn exact_evolution(h: &PauliTermSum, t: f64) -> Result<EvolutionResult> {
    h.check_dense()?;
    let eig = SymmetricEigen::new(h.matrix());
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|e| Complex64::from_polar(1.0, -e * t)));
    let v = &eig.eigenvectors;
    Ok(EvolutionResult {
        unitary: v * phases * v.adjoint(),
        t,
        r: 0,
    })
}

/// Term ordering inside one second-order step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrotterOrdering {
    /// Forward product followed by the reversed product (Strang splitting).
    Symmetric,
    /// The forward product twice, which is first order with step `t/2r`.
    RepeatedForward,
}

/// `e^{-iθP} = cos θ I − i sin θ P` for a Pauli string `P`.
fn pauli_exponential(p: &PauliString, theta: f64) -> DMatrix<Complex64> {
    let dim = 1 << p.len();
    let (s, c) = theta.sin_cos();
    DMatrix::<Complex64>::identity(dim, dim) * Complex64::new(c, 0.0) + p.matrix() * Complex64::new(0.0, -s)
}

fn matrix_power(base: &DMatrix<Complex64>, mut exp: usize) -> DMatrix<Complex64> {
    let n = base.nrows();
    let mut result = DMatrix::identity(n, n);
    let mut square = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            result = &result * &square;
        }
        exp >>= 1;
        if exp > 0 {
            square = &square * &square;
        }
    }
    result
}

/// `U₂ = [Π_{j=1..m} e^{-iHⱼ t/2r} · Π_{j=m..1} e^{-iHⱼ t/2r}]^r`.
pub fn trotter2(h: &PauliTermSum, t: f64, r: usize) -> Result<EvolutionResult> {
    trotter2_with(h, t, r, TrotterOrdering::Symmetric)
}

pub fn trotter2_with(h: &PauliTermSum, t: f64, r: usize, ordering: TrotterOrdering) -> Result<EvolutionResult> {
    h.check_dense()?;
    if r == 0 {
        return argument("Trotter step count must be at least 1");
    }
    let tau = t / (2.0 * r as f64);
    let factors: Vec<DMatrix<Complex64>> = h.terms.iter().map(|(c, p)| pauli_exponential(p, c * tau)).collect();
    let dim = 1 << h.n_qubits;
    // operator order: the first factor of the product acts last on a state
    let forward = factors
        .iter()
        .fold(DMatrix::identity(dim, dim), |acc: DMatrix<Complex64>, f| acc * f);
    let second = match ordering {
        TrotterOrdering::Symmetric => factors
            .iter()
            .rev()
            .fold(DMatrix::identity(dim, dim), |acc: DMatrix<Complex64>, f| acc * f),
        TrotterOrdering::RepeatedForward => forward.clone(),
    };
    let step = forward * second;
    Ok(EvolutionResult {
        unitary: matrix_power(&step, r),
        t,
        r,
    })
}

/// Spectral norm (largest singular value) of `approx − exact`.
pub fn evolution_error(approx: &EvolutionResult, exact: &EvolutionResult) -> Result<f64> {
    if approx.unitary.shape() != exact.unitary.shape() {
        return argument(format!(
            "cannot compare {:?} with {:?} matrices",
            approx.unitary.shape(),
            exact.unitary.shape()
        ));
    }
    let diff = &approx.unitary - &exact.unitary;
    Ok(diff.singular_values().max())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepsForEpsilon {
    /// Smallest step count found whose error is within `epsilon`.
    pub r: usize,
    pub error: f64,
    /// `m^{3/2} t^{3/2} / √ε` for comparison.
    pub scaling_estimate: f64,
}

/// Doubling search for a sufficient step count, refined by bisection
/// between the last failing and first passing power of two.
pub fn steps_for_epsilon(h: &PauliTermSum, t: f64, epsilon: f64) -> Result<StepsForEpsilon> {
    if !(epsilon > 0.0) {
        return argument("epsilon must be positive");
    }
    let exact = exact_evolution(h, t)?;
    let error_at = |r: usize| -> Result<f64> { evolution_error(&trotter2(h, t, r)?, &exact) };
    let mut hi = 1;
    let mut hi_err = error_at(1)?;
    while hi_err > epsilon {
        hi *= 2;
        if hi > MAX_TROTTER_STEPS {
            return Err(Error::Numeric(format!(
                "no step count up to {MAX_TROTTER_STEPS} reaches epsilon {epsilon}"
            )));
        }
        hi_err = error_at(hi)?;
    }
    let mut lo = hi / 2;
    if lo >= 1 {
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            let e = error_at(mid)?;
            if e <= epsilon {
                hi = mid;
                hi_err = e;
            } else {
                lo = mid;
            }
        }
    }
    let m = h.terms.len() as f64;
    Ok(StepsForEpsilon {
        r: hi,
        error: hi_err,
        scaling_estimate: m.powf(1.5) * t.abs().powf(1.5) / epsilon.sqrt(),
    })
}

/// `cos(E t)` and `sin(E t)` over a time grid for one energy `E`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenphaseSeries {
    pub energy: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

/// Eigenphase signals of `e^{iHt} = Σ_λ (cos E_λ t + i sin E_λ t)|λ⟩⟨λ|`,
/// one series per distinct energy in ascending order. The `e^{-iHt}`
/// evolution carries the conjugate phases.
pub fn eigenphase_signals(h: &PauliTermSum, t_grid: &[f64]) -> Result<Vec<EigenphaseSeries>> {
    h.check_dense()?;
    let mut energies: Vec<f64> = SymmetricEigen::new(h.matrix()).eigenvalues.iter().copied().collect();
    energies.sort_by(|a, b| a.total_cmp(b));
    energies.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    Ok(energies
        .into_iter()
        .map(|energy| EigenphaseSeries {
            energy,
            cos: t_grid.iter().map(|t| (energy * t).cos()).collect(),
            sin: t_grid.iter().map(|t| (energy * t).sin()).collect(),
        })
        .collect())
}

/// Single-term Hamiltonian `c·P` on one qubit, handy for tests and examples.
pub fn single_qubit(c: f64, p: Pauli) -> PauliTermSum {
    PauliTermSum {
        n_qubits: 1,
        terms: vec![(c, PauliString::new(vec![p]))],
    }
}
