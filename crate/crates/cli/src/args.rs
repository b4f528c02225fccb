use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable holding the default output directory.
pub const OUT_DIR_ENV: &str = "QFS_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "qfs", version, about = "Quantum Fourier-series model experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a re-uploading model to a sampled periodic signal
    #[command(args_override_self = true)]
    Interpolate(InterpolateArgs),
    /// Train a classifier on a 2-D shape dataset or a CSV file
    #[command(args_override_self = true)]
    Classify(ClassifyArgs),
    /// Extract the Fourier coefficients of a model
    #[command(args_override_self = true)]
    Coeffs(CoeffsArgs),
    /// Sweep the error of the second-order product formula
    #[command(args_override_self = true)]
    Trotter(TrotterArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Interpolate(_) => "interpolate",
            Command::Classify(_) => "classify",
            Command::Coeffs(_) => "coeffs",
            Command::Trotter(_) => "trotter",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Flags shared by every command.
#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory
    #[arg(long, env = OUT_DIR_ENV, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Flat key = value file with defaults for this command's flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignalArg {
    Sine,
    Cosine,
    Log,
    Sawtooth,
    Square,
    Am,
}

#[derive(Debug, Args)]
pub struct InterpolateArgs {
    #[arg(long, value_enum, default_value = "sine")]
    pub signal: SignalArg,
    /// Signal frequency in Hz (the modulator for AM)
    #[arg(long, default_value_t = 1.0)]
    pub freq: f64,
    /// AM carrier frequency in Hz
    #[arg(long, default_value_t = 10.0)]
    pub carrier: f64,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    /// Sample rate in Hz; defaults to spreading the samples over one period
    #[arg(long)]
    pub rate: Option<f64>,
    #[arg(long, default_value_t = 3)]
    pub layers: usize,
    #[arg(long, default_value_t = 1)]
    pub qubits: usize,
    #[arg(long, default_value_t = 500)]
    pub epochs: usize,
    /// Adam step size
    #[arg(long, default_value_t = 0.02)]
    pub lr: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DatasetArg {
    Circle,
    Square,
    Crown,
    File(PathBuf),
}

impl DatasetArg {
    pub fn label(&self) -> String {
        match self {
            DatasetArg::Circle => "circle".into(),
            DatasetArg::Square => "square".into(),
            DatasetArg::Crown => "crown".into(),
            DatasetArg::File(p) => format!("file:{}", p.display()),
        }
    }
}

fn parse_dataset(s: &str) -> Result<DatasetArg, String> {
    match s {
        "circle" => Ok(DatasetArg::Circle),
        "square" => Ok(DatasetArg::Square),
        "crown" => Ok(DatasetArg::Crown),
        _ => match s.strip_prefix("file:") {
            Some(path) if !path.is_empty() => Ok(DatasetArg::File(PathBuf::from(path))),
            _ => Err("expected circle, square, crown or file:<path>".into()),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Binary,
    Multiclass,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, value_parser = parse_dataset, default_value = "circle")]
    pub dataset: DatasetArg,
    #[arg(long, default_value_t = 2)]
    pub qubits: usize,
    #[arg(long, default_value_t = 6)]
    pub layers: usize,
    #[arg(long, value_enum, default_value = "binary")]
    pub mode: ModeArg,
    #[arg(long = "train-n", default_value_t = 200)]
    pub train_n: usize,
    #[arg(long = "test-n", default_value_t = 200)]
    pub test_n: usize,
    #[arg(long, default_value_t = 300)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.05)]
    pub lr: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DrawArg {
    /// One active unit-scale encoding gate per qubit and layer
    UnitGap,
    /// Uniform angles with both encoding gates at unit scale
    Full,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long, default_value_t = 1)]
    pub qubits: usize,
    #[arg(long, default_value_t = 3)]
    pub layers: usize,
    #[arg(long, default_value_t = 1)]
    pub features: usize,
    /// Highest extracted frequency
    #[arg(long = "K", default_value_t = 8)]
    pub k: usize,
    /// Parameter draw used when no training signal is given
    #[arg(long, value_enum, default_value = "unit-gap")]
    pub draw: DrawArg,
    /// Fit the model to this one-period signal before extracting
    #[arg(long = "train-signal", value_enum)]
    pub train_signal: Option<SignalArg>,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long, default_value_t = 300)]
    pub epochs: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderingArg {
    Symmetric,
    Forward,
}

#[derive(Debug, Args)]
pub struct TrotterArgs {
    /// Text file with one "coefficient PAULI" term per line
    #[arg(long)]
    pub hamiltonian: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long = "r-max", default_value_t = 64)]
    pub r_max: usize,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, value_enum, default_value = "symmetric")]
    pub ordering: OrderingArg,
    #[command(flatten)]
    pub common: CommonArgs,
}
