//! Signal and classification dataset generators, plus the dataset CSV format.
//!
//! Signals are sampled in time and mapped onto angles so that one period of the
//! base frequency spans `[0, 2π)`; the model's integer spectrum then lines up
//! with the signal's harmonics.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{config, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SignalKind {
    Sine,
    Cosine,
    /// `ln(1 + φ)` over one period (`φ` in cycles), rescaled to `[-1, 1)`.
    Log,
    Sawtooth,
    Square,
    /// `sin(2π f_c t) · sin(2π f_m t)`; the period is that of the modulator.
    Am {
        carrier: f64,
        modulator: f64,
    },
}

impl SignalKind {
    /// Waveform value at `phase ∈ [0, 1)` of one base period. Jumps take the
    /// right-limit value.
    pub fn waveform(&self, phase: f64) -> f64 {
        let angle = 2.0 * PI * phase;
        match *self {
            SignalKind::Sine => angle.sin(),
            SignalKind::Cosine => angle.cos(),
            SignalKind::Log => 2.0 * (1.0 + phase).ln() / 2f64.ln() - 1.0,
            SignalKind::Sawtooth => 2.0 * phase - 1.0,
            SignalKind::Square => {
                if phase < 0.5 {
                    1.0
                } else {
                    -1.0
                }
            }
            SignalKind::Am { carrier, modulator } => (angle * carrier / modulator).sin() * angle.sin(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SignalKind::Sine => "sine",
            SignalKind::Cosine => "cosine",
            SignalKind::Log => "log",
            SignalKind::Sawtooth => "sawtooth",
            SignalKind::Square => "square",
            SignalKind::Am { .. } => "am",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalSpec {
    pub kind: SignalKind,
    /// Base frequency in Hz (the modulator for AM signals).
    pub frequency: f64,
    /// Samples per second.
    pub sample_rate: f64,
    pub n_samples: usize,
}

impl SignalSpec {
    /// `n_samples` evenly spaced over exactly one base period.
    pub fn one_period(kind: SignalKind, frequency: f64, n_samples: usize) -> Self {
        let frequency = match kind {
            SignalKind::Am { modulator, .. } => modulator,
            _ => frequency,
        };
        Self {
            kind,
            frequency,
            sample_rate: frequency * n_samples as f64,
            n_samples,
        }
    }

    /// Highest frequency present in the signal, in Hz.
    pub fn highest_frequency(&self) -> f64 {
        match self.kind {
            SignalKind::Am { carrier, modulator } => carrier + modulator,
            _ => self.frequency,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.frequency > 0.0 && self.frequency.is_finite()) {
            return config(format!("signal frequency must be positive, got {}", self.frequency));
        }
        if let SignalKind::Am { carrier, modulator } = self.kind {
            if !(carrier > 0.0 && modulator > 0.0) {
                return config("AM carrier and modulator must be positive");
            }
        }
        if self.n_samples == 0 {
            return config("a signal needs at least one sample");
        }
        let limit = 2.0 * self.highest_frequency();
        if !(self.sample_rate > limit) {
            return config(format!(
                "sample rate {} Hz violates the Nyquist limit: must exceed {} Hz",
                self.sample_rate, limit
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskKind {
    Regression,
    /// Labels in `{-1, +1}`.
    Binary,
    /// Labels in `0..n_classes`.
    Multiclass {
        n_classes: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub inputs: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
    pub kind: TaskKind,
}

impl LabeledDataset {
    pub fn new(inputs: Vec<Vec<f64>>, targets: Vec<f64>, kind: TaskKind) -> Result<Self> {
        if inputs.len() != targets.len() {
            return Err(Error::Data(format!(
                "{} inputs but {} targets",
                inputs.len(),
                targets.len()
            )));
        }
        if let Some(first) = inputs.first() {
            if inputs.iter().any(|x| x.len() != first.len()) {
                return Err(Error::Data("inputs have inconsistent dimension".into()));
            }
        }
        for &t in &targets {
            let ok = match kind {
                TaskKind::Regression => t.is_finite(),
                TaskKind::Binary => t == 1.0 || t == -1.0,
                TaskKind::Multiclass { n_classes } => t >= 0.0 && t.fract() == 0.0 && (t as usize) < n_classes,
            };
            if !ok {
                return Err(Error::Data(format!("target {t} invalid for {kind:?}")));
            }
        }
        Ok(Self { inputs, targets, kind })
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.inputs.first().map_or(0, Vec::len)
    }

    /// Relabels a binary dataset as two classes (`-1 → 0`, `+1 → 1`).
    pub fn to_multiclass(&self) -> Result<Self> {
        match self.kind {
            TaskKind::Binary => Self::new(
                self.inputs.clone(),
                self.targets.iter().map(|&t| if t > 0.0 { 1.0 } else { 0.0 }).collect(),
                TaskKind::Multiclass { n_classes: 2 },
            ),
            TaskKind::Multiclass { .. } => Ok(self.clone()),
            TaskKind::Regression => config("regression data has no classes"),
        }
    }

    /// First `n` rows and the remainder.
    pub fn split_at(&self, n: usize) -> (Self, Self) {
        let n = n.min(self.len());
        let head = Self {
            inputs: self.inputs[..n].to_vec(),
            targets: self.targets[..n].to_vec(),
            kind: self.kind,
        };
        let tail = Self {
            inputs: self.inputs[n..].to_vec(),
            targets: self.targets[n..].to_vec(),
            kind: self.kind,
        };
        (head, tail)
    }
}

/// Samples a signal; inputs are the angles `2π·frac(f·t)`.
pub fn generate_signal(spec: &SignalSpec) -> Result<LabeledDataset> {
    spec.validate()?;
    let (inputs, targets) = (0..spec.n_samples)
        .map(|m| {
            let phase = (spec.frequency * m as f64 / spec.sample_rate).fract();
            (vec![2.0 * PI * phase], spec.kind.waveform(phase))
        })
        .unzip();
    LabeledDataset::new(inputs, targets, TaskKind::Regression)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeKind {
    Circle,
    Square,
    Crown,
}

/// Radius of the circle covering half of `[-1, 1]²`.
pub fn circle_radius() -> f64 {
    (2.0 / PI).sqrt()
}

pub const CROWN_RADII: (f64, f64) = (0.4, 0.8);

impl ShapeKind {
    pub fn label(&self, x: f64, y: f64) -> i32 {
        let r2 = x * x + y * y;
        let inside = match self {
            ShapeKind::Circle => r2 < 2.0 / PI,
            // square of area 2: half-side 1/√2
            ShapeKind::Square => x.abs().max(y.abs()) < std::f64::consts::FRAC_1_SQRT_2,
            ShapeKind::Crown => {
                let (r1, r2_) = CROWN_RADII;
                r2 >= r1 * r1 && r2 < r2_ * r2_
            }
        };
        if inside {
            1
        } else {
            -1
        }
    }

    /// Fraction of `[-1, 1]²` labelled `+1`.
    pub fn positive_area_fraction(&self) -> f64 {
        match self {
            ShapeKind::Circle | ShapeKind::Square => 0.5,
            ShapeKind::Crown => {
                let (r1, r2) = CROWN_RADII;
                PI * (r2 * r2 - r1 * r1) / 4.0
            }
        }
    }
}

/// `n` points uniform on `[-1, 1]²` labelled by `kind`.
pub fn generate_classification(kind: ShapeKind, n: usize, seed: u64) -> Result<LabeledDataset> {
    if n == 0 {
        return config("dataset size must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (inputs, targets) = (0..n)
        .map(|_| {
            let x = rng.random_range(-1.0..1.0);
            let y = rng.random_range(-1.0..1.0);
            (vec![x, y], kind.label(x, y) as f64)
        })
        .unzip();
    LabeledDataset::new(inputs, targets, TaskKind::Binary)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineOp {
    Sum,
    Product,
}

/// Pointwise sum or product of univariate waveforms, one variable each.
#[derive(Debug, Clone, PartialEq)]
pub struct MultivariateSignal {
    pub components: Vec<SignalKind>,
    pub op: CombineOp,
}

impl MultivariateSignal {
    /// Value at angles `x` (each component 2π-periodic in its own variable).
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let values = self
            .components
            .iter()
            .zip(x)
            .map(|(k, xi)| k.waveform((xi / (2.0 * PI)).rem_euclid(1.0)));
        match self.op {
            CombineOp::Sum => values.sum(),
            CombineOp::Product => values.product(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.components.len()
    }
}

pub fn compose_multivariate(specs: &[SignalSpec], op: CombineOp) -> Result<MultivariateSignal> {
    if !(1..=4).contains(&specs.len()) {
        return config(format!("compose 1 to 4 signals, got {}", specs.len()));
    }
    for s in specs {
        s.validate()?;
    }
    Ok(MultivariateSignal {
        components: specs.iter().map(|s| s.kind).collect(),
        op,
    })
}

/// Affine map of targets onto `[-1, 1]` and back.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetScaler {
    center: f64,
    half_range: f64,
}

impl TargetScaler {
    pub fn fit(targets: &[f64]) -> Self {
        let lo = targets.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = targets.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() || !hi.is_finite() {
            return Self {
                center: 0.0,
                half_range: 1.0,
            };
        }
        let half = (hi - lo) / 2.0;
        Self {
            center: (hi + lo) / 2.0,
            half_range: if half > 0.0 { half } else { 1.0 },
        }
    }

    pub fn identity() -> Self {
        Self {
            center: 0.0,
            half_range: 1.0,
        }
    }

    pub fn forward(&self, y: f64) -> f64 {
        (y - self.center) / self.half_range
    }

    pub fn inverse(&self, z: f64) -> f64 {
        z * self.half_range + self.center
    }
}

/// Writes `x1..xN,target`; classification targets are written as integers.
pub fn write_csv<W: Write>(dataset: &LabeledDataset, mut out: W) -> Result<()> {
    let header: Vec<String> = (1..=dataset.n_features()).map(|i| format!("x{i}")).collect();
    writeln!(out, "{},target", header.join(","))?;
    for (x, t) in dataset.inputs.iter().zip(&dataset.targets) {
        let xs: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        let target = match dataset.kind {
            TaskKind::Regression => t.to_string(),
            _ => format!("{}", *t as i64),
        };
        writeln!(out, "{},{}", xs.join(","), target)?;
    }
    Ok(())
}

/// Reads the dataset CSV format. For multiclass data without a declared class
/// count, the count is one past the largest label.
pub fn read_csv<R: BufRead>(input: R, kind: TaskKind) -> Result<LabeledDataset> {
    let mut lines = input
        .lines()
        .enumerate()
        .filter(|(_, l)| l.as_ref().map_or(true, |l| !l.trim().is_empty() && !l.starts_with('#')));
    let (_, header) = lines.next().ok_or_else(|| Error::Data("empty dataset file".into()))?;
    let header = header?;
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    if columns.len() < 2 || columns.last() != Some(&"target") {
        return Err(Error::Data(format!("bad header '{header}': expected x1,...,xN,target")));
    }
    let n_features = columns.len() - 1;
    let mut inputs = Vec::new();
    let mut targets = Vec::new();
    for (lineno, line) in lines {
        let line = line?;
        let values = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Data(format!("line {}: {e}", lineno + 1)))?;
        if values.len() != n_features + 1 || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Data(format!(
                "line {}: expected {} finite values",
                lineno + 1,
                n_features + 1
            )));
        }
        targets.push(values[n_features]);
        inputs.push(values[..n_features].to_vec());
    }
    let kind = match kind {
        TaskKind::Multiclass { n_classes: 0 } => TaskKind::Multiclass {
            n_classes: targets.iter().copied().fold(0.0, f64::max) as usize + 1,
        },
        k => k,
    };
    LabeledDataset::new(inputs, targets, kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_wave_halves() {
        let spec = SignalSpec::one_period(SignalKind::Square, 20.0, 100);
        let d = generate_signal(&spec).unwrap();
        assert!(d.targets[..50].iter().all(|&t| t == 1.0));
        assert!(d.targets[50..].iter().all(|&t| t == -1.0));
    }

    #[test]
    fn sine_phase_points() {
        let d = generate_signal(&SignalSpec::one_period(SignalKind::Sine, 3.0, 40)).unwrap();
        assert!(d.targets[0].abs() < 1e-15);
        assert!((d.targets[10] - 1.0).abs() < 1e-12);
        assert!((d.inputs[10][0] - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn am_is_product_of_sines() {
        let kind = SignalKind::Am {
            carrier: 10.0,
            modulator: 1.0,
        };
        let spec = SignalSpec::one_period(kind, 0.0, 200);
        assert_eq!(spec.frequency, 1.0);
        let d = generate_signal(&spec).unwrap();
        for (m, t) in d.targets.iter().enumerate() {
            let time = m as f64 / spec.sample_rate;
            let expected = (2.0 * PI * 10.0 * time).sin() * (2.0 * PI * time).sin();
            assert!((t - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn nyquist_violation_names_limit() {
        let spec = SignalSpec {
            kind: SignalKind::Sine,
            frequency: 20.0,
            sample_rate: 30.0,
            n_samples: 10,
        };
        let err = generate_signal(&spec).unwrap_err().to_string();
        assert!(err.contains("40"), "{err}");
        let am = SignalSpec::one_period(
            SignalKind::Am {
                carrier: 10.0,
                modulator: 1.0,
            },
            1.0,
            20,
        );
        assert!(am.validate().is_err());
    }

    #[test]
    fn regression_targets_in_range() {
        for kind in [
            SignalKind::Sine,
            SignalKind::Cosine,
            SignalKind::Log,
            SignalKind::Sawtooth,
            SignalKind::Square,
            SignalKind::Am {
                carrier: 7.0,
                modulator: 1.0,
            },
        ] {
            let d = generate_signal(&SignalSpec::one_period(kind, 5.0, 97)).unwrap();
            assert!(
                d.targets.iter().all(|t| (-1.0..=1.0).contains(t) && t.is_finite()),
                "{kind:?}"
            );
        }
    }

    #[test]
    fn sawtooth_jump_takes_right_limit() {
        let d = generate_signal(&SignalSpec::one_period(SignalKind::Sawtooth, 20.0, 20)).unwrap();
        assert_eq!(d.targets[0], -1.0);
    }

    #[test]
    fn shape_labels() {
        assert_eq!(ShapeKind::Circle.label(0.0, 0.0), 1);
        assert_eq!(ShapeKind::Circle.label(1.0, 1.0), -1);
        assert_eq!(ShapeKind::Crown.label(0.0, 0.0), -1);
        assert_eq!(ShapeKind::Crown.label(0.6, 0.0), 1);
        assert_eq!(ShapeKind::Square.label(0.7, -0.7), 1);
        assert_eq!(ShapeKind::Square.label(0.72, 0.0), -1);
    }

    #[test]
    fn label_balance_matches_area() {
        for kind in [ShapeKind::Circle, ShapeKind::Square, ShapeKind::Crown] {
            let d = generate_classification(kind, 10_000, 5).unwrap();
            let pos = d.targets.iter().filter(|&&t| t > 0.0).count() as f64 / 10_000.0;
            assert!((pos - kind.positive_area_fraction()).abs() < 0.05, "{kind:?} {pos}");
        }
    }

    #[test]
    fn classification_is_seeded() {
        let a = generate_classification(ShapeKind::Circle, 50, 1).unwrap();
        let b = generate_classification(ShapeKind::Circle, 50, 1).unwrap();
        let c = generate_classification(ShapeKind::Circle, 50, 2).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.inputs, c.inputs);
        assert!(generate_classification(ShapeKind::Circle, 0, 1).is_err());
    }

    #[test]
    fn composition_examples() {
        let sine = SignalSpec::one_period(SignalKind::Sine, 1.0, 10);
        let cosine = SignalSpec::one_period(SignalKind::Cosine, 1.0, 10);
        let sum = compose_multivariate(&[sine, sine], CombineOp::Sum).unwrap();
        assert!(sum.evaluate(&[0.0, 0.0]).abs() < 1e-15);
        let prod = compose_multivariate(&[cosine, cosine], CombineOp::Product).unwrap();
        assert!((prod.evaluate(&[0.0, 0.0]) - 1.0).abs() < 1e-15);
        let mixed = compose_multivariate(&[cosine, sine], CombineOp::Sum).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let (a, b) = (i as f64 * 2.1, j as f64 * 2.1);
                assert!((mixed.evaluate(&[a, b]) - (a.cos() + b.sin())).abs() < 1e-12);
            }
        }
        assert!(compose_multivariate(&[sine; 5], CombineOp::Sum).is_err());
    }

    #[test]
    fn scaler_roundtrip() {
        let s = TargetScaler::fit(&[2.0, 4.0, 3.0]);
        assert_eq!(s.forward(2.0), -1.0);
        assert_eq!(s.forward(4.0), 1.0);
        assert_eq!(s.inverse(0.0), 3.0);
        let flat = TargetScaler::fit(&[0.5, 0.5]);
        assert_eq!(flat.forward(0.5), 0.0);
    }

    #[test]
    fn csv_roundtrip_and_errors() {
        let d = generate_classification(ShapeKind::Crown, 20, 3).unwrap();
        let mut buf = Vec::new();
        write_csv(&d, &mut buf).unwrap();
        let back = read_csv(buf.as_slice(), TaskKind::Binary).unwrap();
        assert_eq!(back, d);

        let bad = "x1,x2,target\n0.1,0.2,1\n0.3,oops,-1\n";
        let err = read_csv(bad.as_bytes(), TaskKind::Binary).unwrap_err();
        assert!(matches!(err, Error::Data(ref m) if m.contains("line 3")), "{err}");
        let short = "x1,x2,target\n0.1,1\n";
        assert!(matches!(
            read_csv(short.as_bytes(), TaskKind::Binary),
            Err(Error::Data(_))
        ));
        let label = "x1,target\n0.1,2\n";
        assert!(read_csv(label.as_bytes(), TaskKind::Binary).is_err());
        let multi = read_csv(
            "x1,target\n0.1,2\n0.2,0\n".as_bytes(),
            TaskKind::Multiclass { n_classes: 0 },
        )
        .unwrap();
        assert_eq!(multi.kind, TaskKind::Multiclass { n_classes: 3 });
    }
}
