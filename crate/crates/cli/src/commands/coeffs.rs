use qfs_core::datasets::{generate_signal, SignalSpec};
use qfs_core::fourier::{analytic_model_series, model_coefficients, FourierSeries, FREQUENCY_TOLERANCE};
use qfs_core::training::{fit, TrainConfig};
use qfs_core::{Error, ModelConfig, ParameterSet, Result};

use super::{common_echo, kv, signal_kind, value_name, Report};
use crate::args::{CoeffsArgs, DrawArg};
use crate::output::{Cell, Table};

const ANALYTIC_QUBIT_LIMIT: usize = 3;

/// Per-feature bound `Σ|β|` over the encoding gates carrying that feature.
fn spectrum_bounds(config: &ModelConfig, params: &ParameterSet) -> Vec<f64> {
    let mut bounds = vec![0.0; config.n_features];
    for layer in &params.betas {
        for (q, pair) in layer.iter().enumerate() {
            for (g, b) in pair.iter().enumerate() {
                bounds[config.feature_index(q, g)] += b.abs();
            }
        }
    }
    bounds
}

fn max_beyond(series: &FourierSeries, bounds: &[f64]) -> f64 {
    series
        .terms()
        .iter()
        .filter(|(f, _)| f.iter().zip(bounds).any(|(w, b)| w.abs() > b + FREQUENCY_TOLERANCE))
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max)
}

pub fn coeffs(args: &CoeffsArgs) -> Result<Report> {
    let config = ModelConfig::new(args.qubits, args.layers, args.features)?;
    let seed = args.common.seed;
    let params = match args.train_signal {
        Some(signal) => {
            if args.features != 1 {
                return Err(Error::Config("--train-signal needs a single-feature model".into()));
            }
            let data = generate_signal(&SignalSpec::one_period(
                signal_kind(signal, 10.0, 1.0),
                1.0,
                args.samples,
            ))?;
            let train = TrainConfig {
                max_epochs: args.epochs,
                seed,
                ..TrainConfig::default()
            };
            fit(&config, &ParameterSet::init(&config, seed), &data, &train)?.final_params
        }
        None => match args.draw {
            DrawArg::UnitGap => ParameterSet::random_unit_gap(&config, seed),
            DrawArg::Full => ParameterSet::init(&config, seed),
        },
    };

    let series = model_coefficients(&config, &params, args.k)?;
    let bounds = spectrum_bounds(&config, &params);
    let beyond = max_beyond(&series, &bounds);
    let hermitian = series.hermitian_residual();
    let disagreement = if args.qubits <= ANALYTIC_QUBIT_LIMIT {
        Some(series.max_difference(&analytic_model_series(&config, &params)?))
    } else {
        None
    };

    let mut echo = vec![
        kv("qubits", args.qubits),
        kv("layers", args.layers),
        kv("features", args.features),
        kv("K", args.k),
    ];
    match args.train_signal {
        Some(signal) => echo.extend([
            kv("train-signal", value_name(&signal)),
            kv("samples", args.samples),
            kv("epochs", args.epochs),
        ]),
        None => echo.push(kv("draw", value_name(&args.draw))),
    }
    echo.extend(common_echo(&args.common));

    let mut columns: Vec<String> = if args.features == 1 {
        vec!["frequency".into()]
    } else {
        (1..=args.features).map(|i| format!("frequency{i}")).collect()
    };
    columns.extend(["re".into(), "im".into(), "abs".into()]);
    let column_refs: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut table = Table::new("coeffs", &echo, &column_refs);
    let bound_text = bounds.iter().map(f64::to_string).collect::<Vec<_>>().join(" ");
    table.summarize("spectrum_bound", Cell::Text(bound_text.clone()));
    table.summarize("max_abs_beyond_bound", beyond);
    table.summarize("hermitian_residual", hermitian);
    if let Some(d) = disagreement {
        table.summarize("analytic_disagreement", d);
    }
    for (freq, c) in series.terms() {
        let mut row: Vec<Cell> = freq.iter().map(|&w| w.into()).collect();
        row.extend([c.re.into(), c.im.into(), c.norm().into()]);
        table.push(row);
    }

    let mut out = Report::default();
    out.files
        .push(table.write(&args.common.out, "coeffs", args.common.format)?);
    out.line(format!("spectrum_bound = {bound_text}"));
    out.line(format!("max_abs_beyond_bound = {beyond:e}"));
    out.line(format!("hermitian_residual = {hermitian:e}"));
    if let Some(d) = disagreement {
        out.line(format!("analytic_disagreement = {d:e}"));
    }
    Ok(out)
}
