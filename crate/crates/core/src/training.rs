//! RMSE loss, exact and finite-difference gradients, and the training loop.

use std::f64::consts::FRAC_PI_2;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::datasets::{LabeledDataset, TaskKind};
use crate::error::{argument, config, Error, Result};
use crate::model::{self, Circuit, ModelConfig, ParameterSet, Readout};

/// Losses at or below this are treated as an exact fit.
const ZERO_LOSS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Optimizer {
    GradientDescent,
    /// Adam with the usual moment decay rates (0.9, 0.999).
    Adam,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GradientMethod {
    ParameterShift,
    FiniteDifference { h: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Batch {
    Full,
    Size(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub max_epochs: usize,
    pub learning_rate: f64,
    pub optimizer: Optimizer,
    pub seed: u64,
    pub gradient_method: GradientMethod,
    pub batch: Batch,
    /// When false the encoding scales `β` stay at their initial values.
    pub train_betas: bool,
    /// Stop when the best loss improved by less than `plateau_tolerance`
    /// (relative) over the last `plateau_window` epochs.
    pub plateau_window: usize,
    pub plateau_tolerance: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            max_epochs: 500,
            learning_rate: 0.05,
            optimizer: Optimizer::Adam,
            seed: 0,
            gradient_method: GradientMethod::ParameterShift,
            batch: Batch::Full,
            train_betas: true,
            plateau_window: 20,
            plateau_tolerance: 1e-6,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return config(format!("learning rate must be positive, got {}", self.learning_rate));
        }
        if self.max_epochs == 0 {
            return config("max_epochs must be at least 1");
        }
        if let GradientMethod::FiniteDifference { h } = self.gradient_method {
            if !(h > 0.0) {
                return config("finite-difference step must be positive");
            }
        }
        if self.batch == Batch::Size(0) {
            return config("batch size must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    /// Full-dataset loss after each epoch.
    pub loss_history: Vec<f64>,
    /// Parameters with the lowest recorded loss (the initial parameters if
    /// training never improved on them).
    pub final_params: ParameterSet,
    pub epochs_run: usize,
}

impl TrainReport {
    pub fn final_loss(&self) -> f64 {
        self.loss_history.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Per-sample target vector matching [`model::readout`]: the label itself for
/// expectation readout, a one-hot row for probability readout.
fn target_vector(config: &ModelConfig, dataset: &LabeledDataset, i: usize) -> Vec<f64> {
    match config.readout {
        Readout::Expectation => vec![dataset.targets[i]],
        Readout::Probabilities => {
            let mut row = vec![0.0; 1 << config.n_qubits];
            if let TaskKind::Multiclass { .. } = dataset.kind {
                row[dataset.targets[i] as usize] = 1.0;
            }
            row
        }
    }
}

fn n_outputs(config: &ModelConfig, dataset: &LabeledDataset) -> usize {
    match (config.readout, dataset.kind) {
        (Readout::Expectation, _) => 1,
        (Readout::Probabilities, TaskKind::Multiclass { n_classes }) => n_classes,
        (Readout::Probabilities, _) => 1 << config.n_qubits,
    }
}

fn check_dataset(config: &ModelConfig, dataset: &LabeledDataset) -> Result<()> {
    if dataset.is_empty() {
        return argument("dataset is empty");
    }
    if dataset.n_features() != config.n_features {
        return argument(format!(
            "dataset has {} features, model expects {}",
            dataset.n_features(),
            config.n_features
        ));
    }
    match (config.readout, dataset.kind) {
        (Readout::Probabilities, TaskKind::Multiclass { n_classes }) => model::check_class_count(config, n_classes),
        (Readout::Probabilities, _) => config_error("probability readout needs multiclass labels"),
        (Readout::Expectation, TaskKind::Multiclass { .. }) => {
            config_error("multiclass labels need probability readout")
        }
        _ => Ok(()),
    }
}

fn config_error(msg: &str) -> Result<()> {
    config(msg)
}

fn squared_error(outputs: &[f64], targets: &[f64], k: usize) -> f64 {
    outputs.iter().zip(targets).take(k).map(|(o, t)| (o - t).powi(2)).sum()
}

/// `sqrt((1/n) Σᵢ ‖f(xᵢ) − yᵢ‖²)`.
pub fn rmse_loss(config: &ModelConfig, params: &ParameterSet, dataset: &LabeledDataset) -> Result<f64> {
    check_dataset(config, dataset)?;
    let k = n_outputs(config, dataset);
    let errors = (0..dataset.len())
        .into_par_iter()
        .map(|i| {
            let state = model::output_state(config, params, &dataset.inputs[i])?;
            let out = model::readout(config, &state)?;
            Ok(squared_error(&out, &target_vector(config, dataset, i), k))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok((errors.iter().sum::<f64>() / dataset.len() as f64).sqrt())
}

/// Exact gradient of [`rmse_loss`] by the parameter-shift rule.
///
/// Every parameter enters a single Pauli rotation with angle `chain · p`, so
/// `∂f/∂p = chain · [f(angle + π/2) − f(angle − π/2)] / 2`, and the RMSE is
/// differentiated analytically on top of that.
pub fn parameter_shift_gradient(
    config: &ModelConfig,
    params: &ParameterSet,
    dataset: &LabeledDataset,
) -> Result<ParameterSet> {
    check_dataset(config, dataset)?;
    let k = n_outputs(config, dataset);
    let n_params = config.n_parameters();
    let per_sample = (0..dataset.len())
        .into_par_iter()
        .map(|i| -> Result<(f64, Vec<f64>)> {
            let circuit = Circuit::compile(config, params, &dataset.inputs[i])?;
            let target = target_vector(config, dataset, i);
            let out = model::readout(config, &circuit.run())?;
            let residual: Vec<f64> = out.iter().zip(&target).take(k).map(|(o, t)| o - t).collect();
            let mut grad = vec![0.0; n_params];
            for (g, slot) in grad.iter_mut().zip(&circuit.slots) {
                if slot.chain == 0.0 {
                    continue;
                }
                let plus = model::readout(config, &circuit.run_shifted(slot.gate, FRAC_PI_2))?;
                let minus = model::readout(config, &circuit.run_shifted(slot.gate, -FRAC_PI_2))?;
                let dot: f64 = residual
                    .iter()
                    .zip(plus.iter().zip(&minus))
                    .map(|(r, (p, m))| r * (p - m) / 2.0)
                    .sum();
                *g = dot * slot.chain;
            }
            Ok((residual.iter().map(|r| r * r).sum(), grad))
        })
        .collect::<Result<Vec<_>>>()?;

    let n = dataset.len() as f64;
    let loss = (per_sample.iter().map(|(e, _)| e).sum::<f64>() / n).sqrt();
    let mut total = vec![0.0; n_params];
    // RMSE is not differentiable at an exact fit; report the zero subgradient
    if loss > ZERO_LOSS {
        for (_, g) in &per_sample {
            total.iter_mut().zip(g).for_each(|(t, gi)| *t += gi);
        }
        total.iter_mut().for_each(|t| *t /= n * loss);
    }
    ParameterSet::from_flat(config, &total)
}

/// Central differences `(L(p + h) − L(p − h)) / 2h` on every flat parameter.
pub fn finite_difference_gradient(
    config: &ModelConfig,
    params: &ParameterSet,
    dataset: &LabeledDataset,
    h: f64,
) -> Result<ParameterSet> {
    if !(h > 0.0) {
        return argument("finite-difference step must be positive");
    }
    let flat = params.to_flat();
    let grad = (0..flat.len())
        .into_par_iter()
        .map(|j| {
            let mut shifted = flat.clone();
            shifted[j] = flat[j] + h;
            let up = rmse_loss(config, &ParameterSet::from_flat(config, &shifted)?, dataset)?;
            shifted[j] = flat[j] - h;
            let down = rmse_loss(config, &ParameterSet::from_flat(config, &shifted)?, dataset)?;
            Ok((up - down) / (2.0 * h))
        })
        .collect::<Result<Vec<f64>>>()?;
    ParameterSet::from_flat(config, &grad)
}

fn gradient(
    config: &ModelConfig,
    params: &ParameterSet,
    dataset: &LabeledDataset,
    method: GradientMethod,
) -> Result<Vec<f64>> {
    let g = match method {
        GradientMethod::ParameterShift => parameter_shift_gradient(config, params, dataset)?,
        GradientMethod::FiniteDifference { h } => finite_difference_gradient(config, params, dataset, h)?,
    };
    Ok(g.to_flat())
}

struct OptimizerState {
    kind: Optimizer,
    rate: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl OptimizerState {
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    fn new(kind: Optimizer, rate: f64, n: usize) -> Self {
        Self {
            kind,
            rate,
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }

    fn step(&mut self, params: &mut [f64], grad: &[f64]) {
        match self.kind {
            Optimizer::GradientDescent => {
                params.iter_mut().zip(grad).for_each(|(p, g)| *p -= self.rate * g);
            }
            Optimizer::Adam => {
                self.t += 1;
                let c1 = 1.0 - Self::BETA1.powi(self.t);
                let c2 = 1.0 - Self::BETA2.powi(self.t);
                for (((p, g), m), v) in params.iter_mut().zip(grad).zip(&mut self.m).zip(&mut self.v) {
                    *m = Self::BETA1 * *m + (1.0 - Self::BETA1) * g;
                    *v = Self::BETA2 * *v + (1.0 - Self::BETA2) * g * g;
                    *p -= self.rate * (*m / c1) / ((*v / c2).sqrt() + Self::EPS);
                }
            }
        }
    }
}

fn plateaued(history: &[f64], window: usize, tolerance: f64) -> bool {
    if window == 0 || history.len() <= window {
        return false;
    }
    let split = history.len() - window;
    let before = history[..split].iter().copied().fold(f64::INFINITY, f64::min);
    let recent = history[split..].iter().copied().fold(f64::INFINITY, f64::min);
    before <= 0.0 || (before - recent) / before < tolerance
}

/// Gradient training from `init`. Deterministic for a fixed `train.seed`.
pub fn fit(
    config: &ModelConfig,
    init: &ParameterSet,
    dataset: &LabeledDataset,
    train: &TrainConfig,
) -> Result<TrainReport> {
    train.validate()?;
    config.validate()?;
    init.check(config)?;
    check_dataset(config, dataset)?;

    let n_theta = config.n_qubits * config.n_layers;
    let mut flat = init.to_flat();
    let mut opt = OptimizerState::new(train.optimizer, train.learning_rate, flat.len());
    let mut rng = ChaCha8Rng::seed_from_u64(train.seed);
    let mut order: Vec<usize> = (0..dataset.len()).collect();

    let mut best_loss = rmse_loss(config, init, dataset)?;
    if !best_loss.is_finite() {
        return Err(Error::Numeric("initial loss is not finite".into()));
    }
    let mut best_params = init.clone();
    let mut history = Vec::with_capacity(train.max_epochs);

    for epoch in 0..train.max_epochs {
        let batches: Vec<LabeledDataset> = match train.batch {
            Batch::Full => vec![dataset.clone()],
            Batch::Size(size) => {
                order.shuffle(&mut rng);
                order
                    .chunks(size)
                    .map(|idx| LabeledDataset {
                        inputs: idx.iter().map(|&i| dataset.inputs[i].clone()).collect(),
                        targets: idx.iter().map(|&i| dataset.targets[i]).collect(),
                        kind: dataset.kind,
                    })
                    .collect()
            }
        };
        for batch in &batches {
            let current = ParameterSet::from_flat(config, &flat)?;
            let mut grad = gradient(config, &current, batch, train.gradient_method)?;
            if !train.train_betas {
                grad[n_theta..].iter_mut().for_each(|g| *g = 0.0);
            }
            if grad.iter().any(|g| !g.is_finite()) {
                return Err(Error::Numeric(format!("non-finite gradient at epoch {epoch}")));
            }
            opt.step(&mut flat, &grad);
        }

        let params = ParameterSet::from_flat(config, &flat)?;
        let loss = rmse_loss(config, &params, dataset)?;
        if !loss.is_finite() {
            return Err(Error::Numeric(format!("loss became {loss} at epoch {epoch}")));
        }
        history.push(loss);
        if loss < best_loss {
            best_loss = loss;
            best_params = params;
        }
        if loss == 0.0 || plateaued(&history, train.plateau_window, train.plateau_tolerance) {
            break;
        }
    }

    Ok(TrainReport {
        epochs_run: history.len(),
        loss_history: history,
        final_params: best_params,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassificationMode {
    Binary,
    Multiclass,
}

/// Fraction of points whose predicted label matches the dataset label.
pub fn classification_accuracy(
    config: &ModelConfig,
    params: &ParameterSet,
    dataset: &LabeledDataset,
    mode: ClassificationMode,
) -> Result<f64> {
    if dataset.is_empty() {
        return argument("dataset is empty");
    }
    let correct = (0..dataset.len())
        .into_par_iter()
        .map(|i| {
            let x = &dataset.inputs[i];
            let hit = match (mode, dataset.kind) {
                (ClassificationMode::Binary, TaskKind::Binary) => {
                    model::predict_binary(config, params, x)? as f64 == dataset.targets[i]
                }
                (ClassificationMode::Multiclass, TaskKind::Multiclass { n_classes }) => {
                    model::predict_multiclass(config, params, x, n_classes)? as f64 == dataset.targets[i]
                }
                _ => return crate::error::config(format!("{mode:?} mode does not match {:?} labels", dataset.kind)),
            };
            Ok(usize::from(hit))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum::<usize>();
    Ok(correct as f64 / dataset.len() as f64)
}
