mod classify;
mod coeffs;
mod interpolate;
mod trotter;

use std::path::PathBuf;

use clap::ValueEnum;
use qfs_core::datasets::SignalKind;

use crate::args::{CommonArgs, SignalArg};

pub use classify::classify;
pub use coeffs::coeffs;
pub use interpolate::interpolate;
pub use trotter::trotter;

/// Files written by a command plus the lines it prints.
#[derive(Debug, Default)]
pub struct Report {
    pub files: Vec<PathBuf>,
    pub lines: Vec<String>,
}

impl Report {
    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }
}

fn signal_kind(arg: SignalArg, carrier: f64, modulator: f64) -> SignalKind {
    match arg {
        SignalArg::Sine => SignalKind::Sine,
        SignalArg::Cosine => SignalKind::Cosine,
        SignalArg::Log => SignalKind::Log,
        SignalArg::Sawtooth => SignalKind::Sawtooth,
        SignalArg::Square => SignalKind::Square,
        SignalArg::Am => SignalKind::Am { carrier, modulator },
    }
}

fn kv(key: &str, value: impl ToString) -> (String, String) {
    (key.to_string(), value.to_string())
}

/// The flag spelling of a value-enum choice.
fn value_name<T: ValueEnum>(value: &T) -> String {
    value
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default()
}

fn common_echo(common: &CommonArgs) -> Vec<(String, String)> {
    vec![kv("seed", common.seed), kv("format", value_name(&common.format))]
}
