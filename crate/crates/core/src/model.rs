//! The layered data re-uploading model
//! `f(x) = ⟨0| U†(x) O U(x) |0⟩` with `U(x) = Π_ℓ F(x, β_ℓ) V(θ_ℓ)`.
//!
//! Each layer applies the variational block `V(θ_ℓ)` (one `RY` per qubit,
//! optionally followed by a linear CNOT chain) and then the feature map
//! `F(x, β_ℓ)`, which is `RY(β₁·x)` followed by `RZ(β₂·x)` on every qubit.
//! That gives three trainable numbers per qubit per layer.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{argument, config, Error, Result};
use crate::sim::{Gate, Observable, StateVector, MAX_QUBITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Readout {
    /// Expectation of the configured observable.
    Expectation,
    /// Computational-basis probabilities over all qubits.
    Probabilities,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub n_qubits: usize,
    pub n_layers: usize,
    pub n_features: usize,
    pub observable: Observable,
    pub entangle: bool,
    pub readout: Readout,
}

impl ModelConfig {
    /// Model reading `Z` on qubit 0, entangling whenever there is more than
    /// one qubit.
    pub fn new(n_qubits: usize, n_layers: usize, n_features: usize) -> Result<Self> {
        let cfg = Self {
            n_qubits,
            n_layers,
            n_features,
            observable: Observable::z(n_qubits.max(1), 0),
            entangle: n_qubits > 1,
            readout: Readout::Expectation,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_observable(mut self, observable: Observable) -> Result<Self> {
        self.observable = observable;
        self.validate()?;
        Ok(self)
    }

    pub fn with_entangle(mut self, entangle: bool) -> Self {
        self.entangle = entangle;
        self
    }

    pub fn with_readout(mut self, readout: Readout) -> Self {
        self.readout = readout;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_QUBITS).contains(&self.n_qubits) {
            return config(format!("qubit count {} out of range", self.n_qubits));
        }
        if self.n_layers == 0 {
            return config("a model needs at least one layer");
        }
        if self.n_features == 0 {
            return config("a model needs at least one input feature");
        }
        if self.n_features > 2 * self.n_qubits {
            return config(format!(
                "{} features cannot be encoded on {} qubits (at most two per qubit)",
                self.n_features, self.n_qubits
            ));
        }
        if self.observable.n_qubits() != self.n_qubits {
            return config(format!(
                "observable acts on {} qubits, model has {}",
                self.observable.n_qubits(),
                self.n_qubits
            ));
        }
        Ok(())
    }

    /// Trainable parameter count, `n_qubits × 3 × n_layers`.
    pub fn n_parameters(&self) -> usize {
        3 * self.n_qubits * self.n_layers
    }

    /// Input feature driving encoding gate `gate` (0 = RY, 1 = RZ) on `qubit`.
    ///
    /// With at most one feature per qubit, features repeat cyclically. With more
    /// features than qubits, the RZ gate on qubit `i` carries feature `i + n`
    /// when that feature exists.
    pub fn feature_index(&self, qubit: usize, gate: usize) -> usize {
        if self.n_features <= self.n_qubits {
            qubit % self.n_features
        } else if gate == 1 && qubit + self.n_qubits < self.n_features {
            qubit + self.n_qubits
        } else {
            qubit
        }
    }
}

/// Variational angles `θ[layer][qubit]` and encoding scales `β[layer][qubit] = (β_RY, β_RZ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterSet {
    pub thetas: Vec<Vec<f64>>,
    pub betas: Vec<Vec<[f64; 2]>>,
}

impl ParameterSet {
    /// `θ = 0`, `β = 1` everywhere.
    pub fn identity_angles(config: &ModelConfig) -> Self {
        Self {
            thetas: vec![vec![0.0; config.n_qubits]; config.n_layers],
            betas: vec![vec![[1.0, 1.0]; config.n_qubits]; config.n_layers],
        }
    }

    /// Default initialization: `θ ~ U[-π, π]` from a seeded generator, `β = 1`.
    pub fn init(config: &ModelConfig, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut params = Self::identity_angles(config);
        for row in &mut params.thetas {
            for t in row.iter_mut() {
                *t = rng.random_range(-PI..PI);
            }
        }
        params
    }

    /// Random angles with exactly one unit-scale encoding gate active per
    /// qubit and layer (`β` drawn from `(±1, 0)` and `(0, ±1)`), so every
    /// encoding contributes generator eigenvalues `±½` and a single-feature
    /// model has integer spectrum `{-L..L}`.
    pub fn random_unit_gap(config: &ModelConfig, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut params = Self::identity_angles(config);
        for (trow, brow) in params.thetas.iter_mut().zip(&mut params.betas) {
            for (t, b) in trow.iter_mut().zip(brow.iter_mut()) {
                *t = rng.random_range(-PI..PI);
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                *b = if rng.random_bool(0.5) { [sign, 0.0] } else { [0.0, sign] };
            }
        }
        params
    }

    pub fn n_layers(&self) -> usize {
        self.thetas.len()
    }

    /// Flat layout: all `θ` layer-major, then all `β` as (layer, qubit, gate).
    pub fn to_flat(&self) -> Vec<f64> {
        let thetas = self.thetas.iter().flatten().copied();
        let betas = self.betas.iter().flatten().flat_map(|b| b.iter().copied());
        thetas.chain(betas).collect()
    }

    pub fn from_flat(config: &ModelConfig, flat: &[f64]) -> Result<Self> {
        let (n, l) = (config.n_qubits, config.n_layers);
        if flat.len() != config.n_parameters() {
            return argument(format!(
                "expected {} parameters, got {}",
                config.n_parameters(),
                flat.len()
            ));
        }
        let (t, b) = flat.split_at(n * l);
        Ok(Self {
            thetas: t.chunks(n).map(<[f64]>::to_vec).collect(),
            betas: b
                .chunks(2 * n)
                .map(|row| row.chunks(2).map(|p| [p[0], p[1]]).collect())
                .collect(),
        })
    }

    /// Index of `β[layer][qubit][gate]` in the flat layout.
    pub fn beta_flat_index(config: &ModelConfig, layer: usize, qubit: usize, gate: usize) -> usize {
        config.n_qubits * config.n_layers + 2 * (layer * config.n_qubits + qubit) + gate
    }

    pub fn check(&self, config: &ModelConfig) -> Result<()> {
        let shape_ok = self.thetas.len() == config.n_layers
            && self.betas.len() == config.n_layers
            && self.thetas.iter().all(|r| r.len() == config.n_qubits)
            && self.betas.iter().all(|r| r.len() == config.n_qubits);
        if !shape_ok {
            return argument(format!(
                "parameter set does not match {} layers x {} qubits",
                config.n_layers, config.n_qubits
            ));
        }
        if !self.to_flat().iter().all(|v| v.is_finite()) {
            return Err(Error::Numeric("parameter set contains NaN or Inf".into()));
        }
        Ok(())
    }
}

/// Applies `RY(β₁ᵢ·xᵢ)` then `RZ(β₂ᵢ·xᵢ)` on every qubit.
pub fn feature_map_layer(state: &StateVector, x: &[f64], betas: &[[f64; 2]]) -> Result<StateVector> {
    let n = state.n_qubits();
    if x.is_empty() || x.len() > 2 * n {
        return config(format!("{} features cannot be encoded on {n} qubits", x.len()));
    }
    if betas.len() != n {
        return argument(format!("expected {n} scale pairs, got {}", betas.len()));
    }
    let cfg = ModelConfig {
        n_qubits: n,
        n_layers: 1,
        n_features: x.len(),
        observable: Observable::z(n, 0),
        entangle: false,
        readout: Readout::Expectation,
    };
    let mut out = state.clone();
    for (q, b) in betas.iter().enumerate() {
        out.apply_in_place(&Gate::Ry {
            target: q,
            angle: b[0] * x[cfg.feature_index(q, 0)],
        })?;
        out.apply_in_place(&Gate::Rz {
            target: q,
            angle: b[1] * x[cfg.feature_index(q, 1)],
        })?;
    }
    Ok(out)
}

/// Applies `RY(θᵢ)` on every qubit, then a CNOT chain `i → i+1` when `entangle`.
pub fn variational_layer(state: &StateVector, thetas: &[f64], entangle: bool) -> Result<StateVector> {
    let n = state.n_qubits();
    if thetas.len() != n {
        return argument(format!("expected {n} angles, got {}", thetas.len()));
    }
    let mut out = state.clone();
    for (q, &t) in thetas.iter().enumerate() {
        out.apply_in_place(&Gate::Ry { target: q, angle: t })?;
    }
    if entangle {
        for q in 0..n.saturating_sub(1) {
            out.apply_in_place(&Gate::Cnot {
                control: q,
                target: q + 1,
            })?;
        }
    }
    Ok(out)
}

/// Where a flat parameter enters the compiled circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterSlot {
    /// Index into [`Circuit::gates`].
    pub gate: usize,
    /// `∂(gate angle)/∂(parameter)`: 1 for `θ`, the feature value for `β`.
    pub chain: f64,
}

/// Gate list realizing `U(x)` for one input, with the location of every
/// trainable parameter (in flat order).
#[derive(Debug, Clone)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
    pub slots: Vec<ParameterSlot>,
}

impl Circuit {
    pub fn compile(config: &ModelConfig, params: &ParameterSet, x: &[f64]) -> Result<Self> {
        config.validate()?;
        params.check(config)?;
        if x.len() != config.n_features {
            return argument(format!(
                "input has {} features, model expects {}",
                x.len(),
                config.n_features
            ));
        }
        let n = config.n_qubits;
        let mut gates = Vec::with_capacity(config.n_layers * (4 * n));
        let mut theta_slots = Vec::with_capacity(n * config.n_layers);
        let mut beta_slots = Vec::with_capacity(2 * n * config.n_layers);
        for (thetas, betas) in params.thetas.iter().zip(&params.betas) {
            for (q, &t) in thetas.iter().enumerate() {
                theta_slots.push(ParameterSlot {
                    gate: gates.len(),
                    chain: 1.0,
                });
                gates.push(Gate::Ry { target: q, angle: t });
            }
            if config.entangle {
                for q in 0..n.saturating_sub(1) {
                    gates.push(Gate::Cnot {
                        control: q,
                        target: q + 1,
                    });
                }
            }
            for (q, b) in betas.iter().enumerate() {
                let x_ry = x[config.feature_index(q, 0)];
                let x_rz = x[config.feature_index(q, 1)];
                beta_slots.push(ParameterSlot {
                    gate: gates.len(),
                    chain: x_ry,
                });
                gates.push(Gate::Ry {
                    target: q,
                    angle: b[0] * x_ry,
                });
                beta_slots.push(ParameterSlot {
                    gate: gates.len(),
                    chain: x_rz,
                });
                gates.push(Gate::Rz {
                    target: q,
                    angle: b[1] * x_rz,
                });
            }
        }
        theta_slots.extend(beta_slots);
        Ok(Self {
            n_qubits: n,
            gates,
            slots: theta_slots,
        })
    }

    pub fn run(&self) -> StateVector {
        let mut state = StateVector::zero(self.n_qubits).expect("validated qubit count");
        for g in &self.gates {
            state.apply_in_place(g).expect("compiled gates are in range");
        }
        state
    }

    /// Runs the circuit with one gate angle shifted by `delta`.
    pub fn run_shifted(&self, gate: usize, delta: f64) -> StateVector {
        let mut state = StateVector::zero(self.n_qubits).expect("validated qubit count");
        for (i, g) in self.gates.iter().enumerate() {
            let g = if i == gate {
                g.with_angle(g.angle().unwrap_or(0.0) + delta)
            } else {
                *g
            };
            state.apply_in_place(&g).expect("compiled gates are in range");
        }
        state
    }
}

/// Model output for one state: a single expectation, or the probability vector.
pub fn readout(config: &ModelConfig, state: &StateVector) -> Result<Vec<f64>> {
    match config.readout {
        Readout::Expectation => Ok(vec![state.expectation(&config.observable)?]),
        Readout::Probabilities => Ok(state.probabilities()),
    }
}

/// `U(x)|0⟩`.
pub fn output_state(config: &ModelConfig, params: &ParameterSet, x: &[f64]) -> Result<StateVector> {
    Ok(Circuit::compile(config, params, x)?.run())
}

/// `f(x) = ⟨0|U†(x) O U(x)|0⟩`.
pub fn evaluate(config: &ModelConfig, params: &ParameterSet, x: &[f64]) -> Result<f64> {
    output_state(config, params, x)?.expectation(&config.observable)
}

/// Basis-state probabilities of `U(x)|0⟩`.
pub fn evaluate_probabilities(config: &ModelConfig, params: &ParameterSet, x: &[f64]) -> Result<Vec<f64>> {
    Ok(output_state(config, params, x)?.probabilities())
}

/// Sign readout; an exact zero maps to `+1`.
pub fn sign_label(value: f64) -> i32 {
    if value < 0.0 {
        -1
    } else {
        1
    }
}

/// Index of the largest of the first `n_classes` probabilities, lowest index on ties.
pub fn argmax_label(probabilities: &[f64], n_classes: usize) -> usize {
    probabilities
        .iter()
        .take(n_classes)
        .enumerate()
        .fold(
            (0, f64::NEG_INFINITY),
            |best, (i, &p)| if p > best.1 { (i, p) } else { best },
        )
        .0
}

pub fn predict_binary(config: &ModelConfig, params: &ParameterSet, x: &[f64]) -> Result<i32> {
    if config.readout != Readout::Expectation {
        return config_err("binary prediction needs expectation readout");
    }
    Ok(sign_label(evaluate(config, params, x)?))
}

pub fn predict_multiclass(config: &ModelConfig, params: &ParameterSet, x: &[f64], n_classes: usize) -> Result<usize> {
    check_class_count(config, n_classes)?;
    if config.readout != Readout::Probabilities {
        return config_err("multiclass prediction needs probability readout");
    }
    Ok(argmax_label(&evaluate_probabilities(config, params, x)?, n_classes))
}

pub fn check_class_count(config: &ModelConfig, n_classes: usize) -> Result<()> {
    if n_classes == 0 || n_classes > 1 << config.n_qubits {
        return config_err(format!(
            "{n_classes} classes cannot be read from {} qubits",
            config.n_qubits
        ));
    }
    Ok(())
}

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    config(msg)
}
