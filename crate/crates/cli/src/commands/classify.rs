use std::fs::File;
use std::io::BufReader;

use qfs_core::datasets::{generate_classification, read_csv, LabeledDataset, ShapeKind, TaskKind};
use qfs_core::model::{check_class_count, predict_binary, predict_multiclass};
use qfs_core::training::{classification_accuracy, fit, ClassificationMode, TrainConfig};
use qfs_core::{Error, ModelConfig, ParameterSet, Readout, Result};

use super::{common_echo, kv, value_name, Report};
use crate::args::{ClassifyArgs, DatasetArg, ModeArg};
use crate::output::{Cell, Table};

fn load(args: &ClassifyArgs) -> Result<LabeledDataset> {
    let total = args.train_n + args.test_n;
    let shape = match &args.dataset {
        DatasetArg::Circle => ShapeKind::Circle,
        DatasetArg::Square => ShapeKind::Square,
        DatasetArg::Crown => ShapeKind::Crown,
        DatasetArg::File(path) => {
            let kind = match args.mode {
                ModeArg::Binary => TaskKind::Binary,
                ModeArg::Multiclass => TaskKind::Multiclass { n_classes: 0 },
            };
            let data = read_csv(BufReader::new(File::open(path)?), kind)?;
            if data.len() < total {
                return Err(Error::Data(format!(
                    "{} holds {} points, {total} requested",
                    path.display(),
                    data.len()
                )));
            }
            return Ok(data);
        }
    };
    let data = generate_classification(shape, total, args.common.seed)?;
    match args.mode {
        ModeArg::Binary => Ok(data),
        ModeArg::Multiclass => data.to_multiclass(),
    }
}

pub fn classify(args: &ClassifyArgs) -> Result<Report> {
    if args.train_n == 0 || args.test_n == 0 {
        return Err(Error::Config("train-n and test-n must be positive".into()));
    }
    let data = load(args)?;
    let (train, rest) = data.split_at(args.train_n);
    let (test, _) = rest.split_at(args.test_n);

    let mut config = ModelConfig::new(args.qubits, args.layers, data.n_features())?;
    let (mode, n_classes) = match (args.mode, data.kind) {
        (ModeArg::Multiclass, TaskKind::Multiclass { n_classes }) => {
            config = config.with_readout(Readout::Probabilities);
            check_class_count(&config, n_classes)?;
            (ClassificationMode::Multiclass, n_classes)
        }
        _ => (ClassificationMode::Binary, 2),
    };

    let train_cfg = TrainConfig {
        max_epochs: args.epochs,
        learning_rate: args.lr,
        seed: args.common.seed,
        ..TrainConfig::default()
    };
    let report = fit(
        &config,
        &ParameterSet::init(&config, args.common.seed),
        &train,
        &train_cfg,
    )?;
    let params = &report.final_params;
    let train_acc = classification_accuracy(&config, params, &train, mode)?;
    let test_acc = classification_accuracy(&config, params, &test, mode)?;

    let mut echo = vec![
        kv("dataset", args.dataset.label()),
        kv("qubits", args.qubits),
        kv("layers", args.layers),
        kv("mode", value_name(&args.mode)),
        kv("train-n", args.train_n),
        kv("test-n", args.test_n),
        kv("epochs", args.epochs),
        kv("lr", args.lr),
    ];
    echo.extend(common_echo(&args.common));

    let mut columns: Vec<String> = (1..=data.n_features()).map(|i| format!("x{i}")).collect();
    columns.extend(["label".into(), "prediction".into()]);
    let column_refs: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut points = Table::new("classify", &echo, &column_refs);
    points.summarize("accuracy", test_acc);
    for (x, &label) in test.inputs.iter().zip(&test.targets) {
        let prediction = match mode {
            ClassificationMode::Binary => predict_binary(&config, params, x)?,
            ClassificationMode::Multiclass => predict_multiclass(&config, params, x, n_classes)? as i32,
        };
        let mut row: Vec<Cell> = x.iter().map(|&v| v.into()).collect();
        row.extend([(label as i32).into(), prediction.into()]);
        points.push(row);
    }

    let mut summary = Table::new(
        "classify",
        &echo,
        &["layers", "parameters", "accuracy", "train_accuracy", "epochs_run"],
    );
    summary.push(vec![
        args.layers.into(),
        config.n_parameters().into(),
        test_acc.into(),
        train_acc.into(),
        report.epochs_run.into(),
    ]);

    let mut loss = Table::new("classify", &echo, &["epoch", "loss"]);
    for (epoch, &l) in report.loss_history.iter().enumerate() {
        loss.push(vec![(epoch + 1).into(), l.into()]);
    }

    let dir = &args.common.out;
    let format = args.common.format;
    let mut out = Report::default();
    out.files.push(points.write(dir, "classify", format)?);
    out.files.push(summary.write(dir, "classify_summary", format)?);
    out.files.push(loss.write(dir, "classify_loss", format)?);
    out.line(format!("layers = {}", args.layers));
    out.line(format!("parameters = {}", config.n_parameters()));
    out.line(format!("train_accuracy = {train_acc}"));
    out.line(format!("accuracy = {test_acc}"));
    Ok(out)
}
