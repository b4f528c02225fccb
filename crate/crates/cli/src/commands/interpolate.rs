use qfs_core::datasets::{generate_signal, SignalKind, SignalSpec};
use qfs_core::fourier::model_coefficients;
use qfs_core::model::evaluate;
use qfs_core::training::{fit, rmse_loss, TrainConfig};
use qfs_core::{Error, ModelConfig, ParameterSet, Result};

use super::{common_echo, kv, signal_kind, Report};
use crate::args::InterpolateArgs;
use crate::output::Table;

/// Highest frequency of the freshly initialised model (both encoding gates at
/// unit scale on every qubit and layer).
fn model_bandwidth(qubits: usize, layers: usize) -> usize {
    2 * qubits * layers
}

pub fn interpolate(args: &InterpolateArgs) -> Result<Report> {
    let kind = signal_kind(args.signal, args.carrier, args.freq);
    let spec = match args.rate {
        Some(rate) => SignalSpec {
            kind,
            frequency: args.freq,
            sample_rate: rate,
            n_samples: args.samples,
        },
        None => SignalSpec::one_period(kind, args.freq, args.samples),
    };
    let data = generate_signal(&spec)?;

    let config = ModelConfig::new(args.qubits, args.layers, 1)?;
    let bandwidth = model_bandwidth(args.qubits, args.layers);
    let per_period = spec.sample_rate / spec.frequency;
    if per_period <= (2 * bandwidth) as f64 {
        return Err(Error::Config(format!(
            "{per_period} samples per period undersample the model: {} layers on {} qubits reach frequency {bandwidth}, \
             so the Nyquist limit needs more than {} samples per period",
            args.layers,
            args.qubits,
            2 * bandwidth
        )));
    }

    let train = TrainConfig {
        max_epochs: args.epochs,
        learning_rate: args.lr,
        seed: args.common.seed,
        ..TrainConfig::default()
    };
    let init = ParameterSet::init(&config, args.common.seed);
    let report = fit(&config, &init, &data, &train)?;
    let params = &report.final_params;
    let rmse = rmse_loss(&config, params, &data)?;
    if !rmse.is_finite() {
        return Err(Error::Numeric(format!("final RMSE is {rmse}")));
    }

    let mut echo = vec![kv("signal", kind.name()), kv("freq", args.freq)];
    if matches!(kind, SignalKind::Am { .. }) {
        echo.push(kv("carrier", args.carrier));
    }
    echo.extend([
        kv("samples", args.samples),
        kv("rate", spec.sample_rate),
        kv("layers", args.layers),
        kv("qubits", args.qubits),
        kv("epochs", args.epochs),
        kv("lr", args.lr),
    ]);
    echo.extend(common_echo(&args.common));

    let mut main = Table::new("interpolate", &echo, &["x", "target", "prediction"]);
    main.summarize("rmse", rmse);
    main.summarize("epochs_run", report.epochs_run);
    main.summarize("parameters", config.n_parameters());
    for (x, &y) in data.inputs.iter().zip(&data.targets) {
        main.push(vec![x[0].into(), y.into(), evaluate(&config, params, x)?.into()]);
    }

    let mut loss = Table::new("interpolate", &echo, &["epoch", "loss"]);
    for (epoch, &l) in report.loss_history.iter().enumerate() {
        loss.push(vec![(epoch + 1).into(), l.into()]);
    }

    let series = model_coefficients(&config, params, bandwidth)?;
    let mut coeffs = Table::new("interpolate", &echo, &["frequency", "re", "im", "abs"]);
    coeffs.summarize("K", bandwidth);
    for (freq, c) in series.terms() {
        coeffs.push(vec![freq[0].into(), c.re.into(), c.im.into(), c.norm().into()]);
    }

    let dir = &args.common.out;
    let format = args.common.format;
    let mut out = Report::default();
    out.files.push(main.write(dir, "interpolate", format)?);
    out.files.push(loss.write(dir, "interpolate_loss", format)?);
    out.files.push(coeffs.write(dir, "interpolate_coeffs", format)?);
    out.line(format!("rmse = {rmse}"));
    out.line(format!("epochs_run = {}", report.epochs_run));
    Ok(out)
}
