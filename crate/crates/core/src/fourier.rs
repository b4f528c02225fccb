//! Fourier view of the quantum model.
//!
//! A model whose inputs enter through `exp(-i x β G)` with generator
//! eigenvalues `λ` is a finite sum `Σ_ω c_ω e^{iω·x}` whose frequencies are
//! differences of eigenvalue sums. This module enumerates those spectra,
//! recovers coefficients by uniform sampling plus an inverse DFT, and computes
//! the same coefficients analytically by expanding the circuit.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{config, Result};
use crate::model::{ModelConfig, ParameterSet};
use crate::sim::{apply_matrix2, Matrix2, StateVector};

/// Absolute tolerance for treating two frequencies as equal.
pub const FREQUENCY_TOLERANCE: f64 = 1e-9;

/// Largest sampling budget `N·(2K+1)^N` accepted by [`multivariate_extract`].
pub const MAX_SAMPLE_BUDGET: usize = 1_000_000;

const MAX_ANALYTIC_QUBITS: usize = 3;
const MAX_ANALYTIC_TERMS: usize = 200_000;

/// Sorted, symmetric set of accessible frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySpectrum {
    pub frequencies: Vec<f64>,
}

impl FrequencySpectrum {
    pub fn contains(&self, omega: f64) -> bool {
        self.frequencies
            .iter()
            .any(|f| (f - omega).abs() <= FREQUENCY_TOLERANCE)
    }

    pub fn max_frequency(&self) -> f64 {
        self.frequencies.last().copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }
}

fn dedup_sorted(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(|a, b| a.total_cmp(b));
    let mut out: Vec<f64> = Vec::with_capacity(values.len());
    for v in values {
        match out.last() {
            Some(last) if (v - last).abs() <= FREQUENCY_TOLERANCE => {}
            _ => out.push(v),
        }
    }
    out
}

/// Frequencies reachable when each encoding gate (given by its generator
/// eigenvalues) is repeated in `n_layers` layers: every difference `Λ_k − Λ_j`
/// of sums `Λ` that pick one eigenvalue per gate occurrence.
pub fn spectrum_from_eigenvalues(eigenvalue_lists: &[Vec<f64>], n_layers: usize) -> FrequencySpectrum {
    let mut sums = vec![0.0];
    for _ in 0..n_layers {
        for eigenvalues in eigenvalue_lists {
            let next = sums
                .iter()
                .flat_map(|s| eigenvalues.iter().map(move |e| s + e))
                .collect();
            sums = dedup_sorted(next);
        }
    }
    let diffs = sums.iter().flat_map(|a| sums.iter().map(move |b| a - b)).collect();
    FrequencySpectrum {
        frequencies: dedup_sorted(diffs),
    }
}

/// A finite Fourier series `Σ_ω c_ω e^{i ω·x}` over `dims` variables.
///
/// Frequencies are stored as real vectors so non-integer spectra from
/// arbitrary encoding scales fit the same type.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    dims: usize,
    terms: Vec<(Vec<f64>, Complex64)>,
    /// Period of each variable; `2π` unless stated otherwise.
    pub period: f64,
}

impl FourierSeries {
    /// Merges coincident frequencies and sorts the terms lexicographically.
    pub fn new(dims: usize, terms: Vec<(Vec<f64>, Complex64)>) -> Self {
        let mut terms = terms;
        terms.sort_by(|a, b| cmp_freq(&a.0, &b.0));
        let mut merged: Vec<(Vec<f64>, Complex64)> = Vec::with_capacity(terms.len());
        for (freq, c) in terms {
            assert_eq!(freq.len(), dims, "frequency vector has wrong dimension");
            match merged.last_mut() {
                Some((last, acc)) if freq_close(last, &freq) => *acc += c,
                _ => merged.push((freq, c)),
            }
        }
        Self {
            dims,
            terms: merged,
            period: 2.0 * PI,
        }
    }

    /// Univariate series from `(n, c_n)` pairs.
    pub fn univariate(coefficients: impl IntoIterator<Item = (f64, Complex64)>) -> Self {
        Self::new(1, coefficients.into_iter().map(|(n, c)| (vec![n], c)).collect())
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn terms(&self) -> &[(Vec<f64>, Complex64)] {
        &self.terms
    }

    /// `c_ω`, zero when `ω` carries no term.
    pub fn coefficient(&self, frequency: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .find(|(f, _)| freq_close(f, frequency))
            .map(|(_, c)| *c)
            .unwrap_or_default()
    }

    pub fn coefficient1(&self, n: f64) -> Complex64 {
        self.coefficient(&[n])
    }

    /// `Σ_ω c_ω e^{iω·x}` with `x` rescaled to the series period.
    pub fn evaluate(&self, x: &[f64]) -> Complex64 {
        let scale = 2.0 * PI / self.period;
        self.terms
            .iter()
            .map(|(f, c)| {
                let phase: f64 = f.iter().zip(x).map(|(w, xi)| w * xi).sum();
                c * Complex64::from_polar(1.0, phase * scale)
            })
            .sum()
    }

    /// `max_ω |c_{−ω} − conj(c_ω)|`; zero for the series of a real function.
    pub fn hermitian_residual(&self) -> f64 {
        self.terms
            .iter()
            .map(|(f, c)| {
                let neg: Vec<f64> = f.iter().map(|w| -w).collect();
                (self.coefficient(&neg) - c.conj()).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Largest `|c_ω|` among frequencies with some component beyond `bound` in
    /// absolute value.
    pub fn max_outside(&self, bound: f64) -> f64 {
        self.terms
            .iter()
            .filter(|(f, _)| f.iter().any(|w| w.abs() > bound + FREQUENCY_TOLERANCE))
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|a_ω − b_ω|` over the union of both frequency sets.
    pub fn max_difference(&self, other: &FourierSeries) -> f64 {
        let mine = self.terms.iter().map(|(f, c)| (c - other.coefficient(f)).norm());
        let theirs = other.terms.iter().map(|(f, c)| (c - self.coefficient(f)).norm());
        mine.chain(theirs).fold(0.0, f64::max)
    }
}

fn freq_close(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= FREQUENCY_TOLERANCE)
}

fn cmp_freq(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > FREQUENCY_TOLERANCE {
            return x.total_cmp(y);
        }
    }
    std::cmp::Ordering::Equal
}

/// `e^{-2πi·k/m}` for `k = 0..m`; indexing by `(n·j) mod m` keeps the phases
/// exact in integer arithmetic.
fn twiddles(m: usize) -> Vec<Complex64> {
    (0..m)
        .map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / m as f64))
        .collect()
}

/// Inverse DFT of one line of `2K+1` samples, returning `c_{−K..K}`.
fn line_coefficients(samples: &[Complex64], k_max: usize, table: &[Complex64]) -> Vec<Complex64> {
    let m = samples.len();
    let k = k_max as i64;
    (-k..=k)
        .map(|n| {
            let n_mod = n.rem_euclid(m as i64) as usize;
            let acc: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(j, s)| s * table[(n_mod * j) % m])
                .sum();
            acc / m as f64
        })
        .collect()
}

/// Sampling grid `x_m = 2πm/(2K+1)`.
pub fn sample_grid(k_max: usize) -> Vec<f64> {
    let m = 2 * k_max + 1;
    (0..m).map(|j| 2.0 * PI * j as f64 / m as f64).collect()
}

/// `c_n = (1/(2K+1)) Σ_m f(x_m) e^{−i n x_m}` for `n ∈ [−K, K]`.
pub fn try_extract_coefficients<F>(f: F, k_max: usize) -> Result<FourierSeries>
where
    F: Fn(f64) -> Result<f64>,
{
    let samples = sample_grid(k_max)
        .into_iter()
        .map(|x| f(x).map(|v| Complex64::new(v, 0.0)))
        .collect::<Result<Vec<_>>>()?;
    let coeffs = line_coefficients(&samples, k_max, &twiddles(samples.len()));
    Ok(FourierSeries::univariate(
        coeffs
            .into_iter()
            .enumerate()
            .map(|(i, c)| (i as f64 - k_max as f64, c)),
    ))
}

pub fn extract_coefficients<F: Fn(f64) -> f64>(f: F, k_max: usize) -> FourierSeries {
    try_extract_coefficients(|x| Ok(f(x)), k_max).expect("infallible sampler")
}

pub fn evaluate_series(series: &FourierSeries, x: f64) -> Complex64 {
    series.evaluate(&[x])
}

/// Tensor-grid sampling of an `n_vars`-variate function followed by a
/// separable inverse DFT along each axis.
pub fn try_multivariate_extract<F>(f: F, n_vars: usize, k_max: usize) -> Result<FourierSeries>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let m = 2 * k_max + 1;
    let budget = (m as u128).checked_pow(n_vars as u32).map(|p| p * n_vars as u128);
    match budget {
        Some(b) if n_vars > 0 && b <= MAX_SAMPLE_BUDGET as u128 => {}
        _ => {
            return config(format!(
                "sampling {n_vars} variables at K={k_max} exceeds the budget of {MAX_SAMPLE_BUDGET}"
            ))
        }
    }
    let total = m.pow(n_vars as u32);
    let grid = sample_grid(k_max);
    let mut data = Vec::with_capacity(total);
    let mut point = vec![0.0; n_vars];
    for flat in 0..total {
        let mut rem = flat;
        for axis in (0..n_vars).rev() {
            point[axis] = grid[rem % m];
            rem /= m;
        }
        data.push(Complex64::new(f(&point)?, 0.0));
    }

    let table = twiddles(m);
    for axis in 0..n_vars {
        let stride = m.pow((n_vars - 1 - axis) as u32);
        let mut line = vec![Complex64::default(); m];
        for start in 0..total {
            // first element of each line along `axis`
            if !(start / stride).is_multiple_of(m) {
                continue;
            }
            for (j, slot) in line.iter_mut().enumerate() {
                *slot = data[start + j * stride];
            }
            for (j, c) in line_coefficients(&line, k_max, &table).into_iter().enumerate() {
                data[start + j * stride] = c;
            }
        }
    }

    let terms = data
        .into_iter()
        .enumerate()
        .map(|(flat, c)| {
            let mut freq = vec![0.0; n_vars];
            let mut rem = flat;
            for axis in (0..n_vars).rev() {
                freq[axis] = (rem % m) as f64 - k_max as f64;
                rem /= m;
            }
            (freq, c)
        })
        .collect();
    Ok(FourierSeries::new(n_vars, terms))
}

pub fn multivariate_extract<F: Fn(&[f64]) -> f64>(f: F, n_vars: usize, k_max: usize) -> Result<FourierSeries> {
    try_multivariate_extract(|x| Ok(f(x)), n_vars, k_max)
}

/// Samples the model output on the DFT grid (univariate models).
pub fn model_coefficients(config: &ModelConfig, params: &ParameterSet, k_max: usize) -> Result<FourierSeries> {
    if config.n_features == 1 {
        try_extract_coefficients(|x| crate::model::evaluate(config, params, &[x]), k_max)
    } else {
        try_multivariate_extract(|x| crate::model::evaluate(config, params, x), config.n_features, k_max)
    }
}

/// Path expansion of `U(x)|0⟩ = Σ_ω |a_ω⟩ e^{iω·x}`.
struct BranchedState {
    n_qubits: usize,
    branches: Vec<(Vec<f64>, Vec<Complex64>)>,
}

impl BranchedState {
    fn apply_fixed(&mut self, m: &Matrix2, qubit: usize) {
        for (_, amps) in &mut self.branches {
            apply_matrix2(amps, self.n_qubits, qubit, m);
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let gate = crate::sim::Gate::Cnot { control, target };
        for (_, amps) in &mut self.branches {
            crate::sim::apply_to_amplitudes(amps, self.n_qubits, &gate).expect("model CNOTs are in range");
        }
    }

    /// Splits every branch along the eigenprojectors of `exp(-i·scale·x_axis·σ/2)`.
    fn apply_encoding(
        &mut self,
        projectors: &[(f64, Matrix2); 2],
        qubit: usize,
        axis: usize,
        scale: f64,
    ) -> Result<()> {
        if scale == 0.0 {
            return Ok(());
        }
        let mut next = Vec::with_capacity(2 * self.branches.len());
        for (freq, amps) in &self.branches {
            for (eigenvalue, proj) in projectors {
                let mut part = amps.clone();
                apply_matrix2(&mut part, self.n_qubits, qubit, proj);
                let mut f = freq.clone();
                f[axis] -= scale * eigenvalue;
                next.push((f, part));
            }
        }
        next.sort_by(|a, b| cmp_freq(&a.0, &b.0));
        let mut merged: Vec<(Vec<f64>, Vec<Complex64>)> = Vec::with_capacity(next.len());
        for (f, amps) in next {
            match merged.last_mut() {
                Some((last, acc)) if freq_close(last, &f) => acc.iter_mut().zip(&amps).for_each(|(a, b)| *a += b),
                _ => merged.push((f, amps)),
            }
        }
        if merged.len() > MAX_ANALYTIC_TERMS {
            return config("analytic expansion has too many distinct frequencies");
        }
        self.branches = merged;
        Ok(())
    }
}

fn projectors_y() -> [(f64, Matrix2); 2] {
    let h = Complex64::new(0.5, 0.0);
    let hi = Complex64::new(0.0, 0.5);
    // (I ± Y)/2
    [(0.5, [[h, -hi], [hi, h]]), (-0.5, [[h, hi], [-hi, h]])]
}

fn projectors_z() -> [(f64, Matrix2); 2] {
    let o = Complex64::default();
    let l = Complex64::new(1.0, 0.0);
    [(0.5, [[l, o], [o, o]]), (-0.5, [[o, o], [o, l]])]
}

/// Coefficients of the model computed without sampling.
///
/// Every encoding gate is split along its generator eigenprojectors, which
/// writes the output state as `Σ_ω |a_ω⟩ e^{iω·x}`; the expectation then has
/// coefficients `c_Δ = Σ_{ω'−ω=Δ} ⟨a_ω|O|a_ω'⟩`. For a single encoding block
/// this is `Σ_{Λ_k−Λ_j=Δ} α*_j α_k O_jk` in the encoding eigenbasis.
pub fn analytic_model_series(config: &ModelConfig, params: &ParameterSet) -> Result<FourierSeries> {
    config.validate()?;
    params.check(config)?;
    let n = config.n_qubits;
    if n > MAX_ANALYTIC_QUBITS {
        return crate::error::config(format!(
            "analytic series supports at most {MAX_ANALYTIC_QUBITS} qubits, got {n}"
        ));
    }
    let dims = config.n_features;
    let start = StateVector::zero(n)?.into_amplitudes();
    let mut state = BranchedState {
        n_qubits: n,
        branches: vec![(vec![0.0; dims], start)],
    };
    let (py, pz) = (projectors_y(), projectors_z());
    for (thetas, betas) in params.thetas.iter().zip(&params.betas) {
        for (q, &t) in thetas.iter().enumerate() {
            state.apply_fixed(&crate::sim::ry(t), q);
        }
        if config.entangle {
            for q in 0..n.saturating_sub(1) {
                state.apply_cnot(q, q + 1);
            }
        }
        for (q, b) in betas.iter().enumerate() {
            state.apply_encoding(&py, q, config.feature_index(q, 0), b[0])?;
            state.apply_encoding(&pz, q, config.feature_index(q, 1), b[1])?;
        }
    }

    let obs = &config.observable;
    let mut terms = Vec::with_capacity(state.branches.len().pow(2));
    for (f_bra, bra) in &state.branches {
        // O|a_ω'⟩ via the Pauli terms, one column at a time
        for (f_ket, ket) in &state.branches {
            let value: Complex64 = obs
                .terms()
                .iter()
                .map(|(w, p)| pauli_matrix_element(p, bra, ket) * *w)
                .sum();
            let freq = f_ket.iter().zip(f_bra).map(|(k, b)| k - b).collect();
            terms.push((freq, value));
        }
    }
    Ok(FourierSeries::new(dims, terms))
}

/// `⟨bra|P|ket⟩`.
fn pauli_matrix_element(p: &crate::sim::PauliString, bra: &[Complex64], ket: &[Complex64]) -> Complex64 {
    let (flip, zmask, ys) = p.masks();
    let mut acc = Complex64::default();
    for (k, a) in ket.iter().enumerate() {
        let sign = if (k & zmask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        acc += bra[k ^ flip].conj() * a * sign;
    }
    acc * Complex64::i().powu(ys)
}

/// `(|ω|, max |c_ω|)` sorted by `|ω|`, with `|ω|` the Euclidean norm of the
/// frequency vector.
pub fn decay_profile(series: &FourierSeries) -> Vec<(f64, f64)> {
    let mut by_norm: Vec<(f64, f64)> = series
        .terms()
        .iter()
        .map(|(f, c)| (f.iter().map(|w| w * w).sum::<f64>().sqrt(), c.norm()))
        .collect();
    by_norm.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (w, mag) in by_norm {
        match out.last_mut() {
            Some((last, m)) if (w - *last).abs() <= FREQUENCY_TOLERANCE => *m = m.max(mag),
            _ => out.push((w, mag)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::evaluate;

    fn ints(spec: &FrequencySpectrum) -> Vec<i64> {
        spec.frequencies.iter().map(|f| f.round() as i64).collect()
    }

    #[test]
    fn spectrum_of_half_unit_generator() {
        let s = spectrum_from_eigenvalues(&[vec![-0.5, 0.5]], 1);
        assert_eq!(ints(&s), vec![-1, 0, 1]);
        for l in 1..=5 {
            let s = spectrum_from_eigenvalues(&[vec![-0.5, 0.5]], l);
            assert_eq!(ints(&s), (-(l as i64)..=l as i64).collect::<Vec<_>>());
        }
        let s = spectrum_from_eigenvalues(&[vec![0.3]], 4);
        assert_eq!(s.frequencies, vec![0.0]);
    }

    #[test]
    fn spectrum_of_two_gates_per_layer() {
        // RY and RZ on the same variable each contribute ±½
        let s = spectrum_from_eigenvalues(&[vec![-0.5, 0.5], vec![-0.5, 0.5]], 3);
        assert_eq!(ints(&s), (-6..=6).collect::<Vec<_>>());
    }

    #[test]
    fn extract_cosine_and_constant() {
        let s = extract_coefficients(f64::cos, 2);
        for n in -2..=2 {
            let expected = if n == 1 || n == -1 { 0.5 } else { 0.0 };
            assert!((s.coefficient1(n as f64) - Complex64::new(expected, 0.0)).norm() < 1e-10);
        }
        let s = extract_coefficients(|_| 1.0, 3);
        assert!((s.coefficient1(0.0) - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        assert!(s.max_outside(0.0) < 1e-10);
    }

    #[test]
    fn k_zero_is_the_mean() {
        let s = extract_coefficients(|x| 0.3 + x.sin(), 0);
        assert_eq!(s.terms().len(), 1);
        assert!((s.coefficient1(0.0).re - 0.3).abs() < 1e-12);
    }

    #[test]
    fn series_evaluation_examples() {
        let one = FourierSeries::univariate([(0.0, Complex64::new(1.0, 0.0))]);
        assert!((evaluate_series(&one, 2.7) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let cos = FourierSeries::univariate([(1.0, Complex64::new(0.5, 0.0)), (-1.0, Complex64::new(0.5, 0.0))]);
        assert!((evaluate_series(&cos, 0.0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn band_limited_roundtrip() {
        let f = |x: f64| 0.2 + 0.5 * (3.0 * x).cos() - 0.7 * (2.0 * x).sin() + 0.1 * x.cos();
        let s = extract_coefficients(f, 4);
        for i in 0..100 {
            let x = -7.0 + 0.137 * i as f64;
            let v = evaluate_series(&s, x);
            assert!((v.re - f(x)).abs() < 1e-8 && v.im.abs() < 1e-9);
        }
    }

    #[test]
    fn multivariate_examples() {
        let s = multivariate_extract(|x| x[0].cos(), 2, 1).unwrap();
        assert!((s.coefficient(&[1.0, 0.0]).re - 0.5).abs() < 1e-12);
        assert!((s.coefficient(&[-1.0, 0.0]).re - 0.5).abs() < 1e-12);
        assert!((s.coefficient(&[0.0, 1.0])).norm() < 1e-12);
        let s = multivariate_extract(|x| x[0].cos() * x[1].cos(), 2, 1).unwrap();
        for (f, c) in s.terms() {
            let expected = if f[0].abs() == 1.0 && f[1].abs() == 1.0 {
                0.25
            } else {
                0.0
            };
            assert!((c - Complex64::new(expected, 0.0)).norm() < 1e-12, "{f:?}");
        }
    }

    #[test]
    fn multivariate_budget_guard() {
        assert!(multivariate_extract(|_| 0.0, 4, 20).is_err());
        assert!(multivariate_extract(|_| 0.0, 0, 1).is_err());
    }

    #[test]
    fn analytic_zero_encoding_is_constant() {
        let cfg = ModelConfig::new(2, 2, 2).unwrap();
        let mut p = ParameterSet::init(&cfg, 11);
        p.betas.iter_mut().flatten().for_each(|b| *b = [0.0, 0.0]);
        let s = analytic_model_series(&cfg, &p).unwrap();
        assert_eq!(s.terms().len(), 1);
        let c0 = s.coefficient(&[0.0, 0.0]);
        assert!((c0.re - evaluate(&cfg, &p, &[0.3, 0.4]).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn analytic_single_layer_matches_sampling() {
        let cfg = ModelConfig::new(1, 1, 1).unwrap();
        for seed in 0..10 {
            let p = ParameterSet::init(&cfg, seed);
            let analytic = analytic_model_series(&cfg, &p).unwrap();
            let sampled = model_coefficients(&cfg, &p, 2).unwrap();
            assert!(analytic.max_difference(&sampled) < 1e-9);
            assert!(analytic.coefficient1(0.0).im.abs() < 1e-12);
        }
    }

    #[test]
    fn analytic_guard_on_qubits() {
        let cfg = ModelConfig::new(4, 1, 1).unwrap();
        let p = ParameterSet::init(&cfg, 0);
        assert!(analytic_model_series(&cfg, &p).is_err());
    }

    #[test]
    fn decay_of_cosine_series() {
        let profile = decay_profile(&extract_coefficients(f64::cos, 5));
        for (w, m) in profile {
            if w > 1.5 {
                assert!(m < 1e-10);
            }
        }
    }
}
