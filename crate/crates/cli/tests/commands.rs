mod common;

use std::fs;

use common::{code, qfs, run, Csv};
use qfs_core::hamiltonian::{evolution_error, exact_evolution, trotter2, PauliTermSum};
use qfs_core::model::evaluate;
use qfs_core::{ModelConfig, ParameterSet};
use tempfile::tempdir;

#[test]
fn square_wave_at_three_layers_reports_rmse() {
    let dir = tempdir().unwrap();
    let out = run(
        &[
            "interpolate",
            "--signal",
            "square",
            "--freq",
            "20",
            "--layers",
            "3",
            "--samples",
            "20",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = Csv::read(&dir.path().join("interpolate.csv"));
    assert!(csv.value("rmse") > 0.0 && csv.value("rmse") < 1.0);
    assert_eq!(csv.columns, ["x", "target", "prediction"]);
    assert_eq!(csv.rows.len(), 20);
    assert!(dir.path().join("interpolate_loss.csv").exists());
    assert!(dir.path().join("interpolate_coeffs.csv").exists());
}

#[test]
fn single_layer_learns_sine() {
    let dir = tempdir().unwrap();
    let out = run(&["interpolate", "--signal", "sine", "--layers", "1"], dir.path());
    assert_eq!(code(&out), 0);
    let rmse = Csv::read(&dir.path().join("interpolate.csv")).value("rmse");
    assert!(rmse < 1e-2, "rmse {rmse}");
}

#[test]
fn undersampled_signal_is_a_usage_error() {
    let dir = tempdir().unwrap();
    let out = run(
        &["interpolate", "--signal", "square", "--freq", "20", "--samples", "5"],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Nyquist"));
    let out = run(&["interpolate", "--freq", "1", "--rate", "1.5"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn invalid_flag_values_are_usage_errors() {
    let dir = tempdir().unwrap();
    assert_eq!(code(&run(&["interpolate", "--layers", "many"], dir.path())), 2);
    assert_eq!(code(&run(&["interpolate", "--signal", "triangle"], dir.path())), 2);
    assert_eq!(code(&run(&["classify", "--dataset", "spiral"], dir.path())), 2);
    assert_eq!(
        code(&run(&["coeffs", "--qubits", "1", "--features", "3"], dir.path())),
        2
    );
    assert_eq!(code(&qfs().arg("launch").output().unwrap()), 2);
}

#[test]
fn two_qubit_six_layer_circle_classifier() {
    let dir = tempdir().unwrap();
    let out = run(
        &["classify", "--dataset", "circle", "--qubits", "2", "--layers", "6"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let summary = Csv::read(&dir.path().join("classify_summary.csv"));
    assert_eq!(summary.columns[..3], ["layers", "parameters", "accuracy"]);
    assert_eq!(summary.column("parameters"), [36.0]);
    assert!(summary.column("accuracy")[0] >= 0.85);
    let points = Csv::read(&dir.path().join("classify.csv"));
    assert_eq!(points.columns, ["x1", "x2", "label", "prediction"]);
    assert_eq!(points.rows.len(), 200);
}

#[test]
fn one_qubit_one_layer_is_near_chance() {
    let dir = tempdir().unwrap();
    let out = run(
        &["classify", "--dataset", "circle", "--qubits", "1", "--layers", "1"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let acc = Csv::read(&dir.path().join("classify.csv")).value("accuracy");
    assert!((0.45..=0.65).contains(&acc), "accuracy {acc}");
}

#[test]
fn file_dataset_round_trip_and_malformed_rows() {
    let dir = tempdir().unwrap();
    let good = dir.path().join("points.csv");
    let mut text = String::from("x1,x2,target\n");
    for i in 0..12 {
        let x = -1.0 + i as f64 / 6.0;
        text += &format!("{x},{},{}\n", 0.5 * x, if x < 0.0 { -1 } else { 1 });
    }
    fs::write(&good, text).unwrap();
    let arg = format!("file:{}", good.display());
    let out = run(
        &[
            "classify",
            "--dataset",
            &arg,
            "--train-n",
            "8",
            "--test-n",
            "4",
            "--layers",
            "1",
            "--epochs",
            "5",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(Csv::read(&dir.path().join("classify.csv")).rows.len(), 4);

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "x1,x2,target\n0.1,0.2,1\n0.3,oops,-1\n").unwrap();
    let arg = format!("file:{}", bad.display());
    let out = run(
        &["classify", "--dataset", &arg, "--train-n", "1", "--test-n", "1"],
        dir.path(),
    );
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let missing = format!("file:{}", dir.path().join("absent.csv").display());
    assert_eq!(code(&run(&["classify", "--dataset", &missing], dir.path())), 4);
}

#[test]
fn multiclass_mode_on_a_shape() {
    let dir = tempdir().unwrap();
    let out = run(
        &[
            "classify",
            "--mode",
            "multiclass",
            "--layers",
            "2",
            "--train-n",
            "40",
            "--test-n",
            "20",
            "--epochs",
            "10",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let points = Csv::read(&dir.path().join("classify.csv"));
    assert!(points.column("label").iter().all(|&l| l == 0.0 || l == 1.0));
    assert!(points.column("prediction").iter().all(|&l| l == 0.0 || l == 1.0));
}

#[test]
fn random_model_spectrum_is_truncated() {
    let dir = tempdir().unwrap();
    let out = run(&["coeffs", "--qubits", "1", "--layers", "3", "--K", "8"], dir.path());
    assert_eq!(code(&out), 0);
    let csv = Csv::read(&dir.path().join("coeffs.csv"));
    assert!(csv.value("analytic_disagreement") < 1e-9);
    let freqs = csv.column("frequency");
    let mags = csv.column("abs");
    assert_eq!(freqs.len(), 17);
    for (f, m) in freqs.iter().zip(&mags) {
        if f.abs() > 3.0 {
            assert!(*m < 1e-9, "|c_{f}| = {m}");
        }
    }
}

#[test]
fn trained_sine_concentrates_at_first_harmonic() {
    let dir = tempdir().unwrap();
    let out = run(&["coeffs", "--train-signal", "sine", "--K", "4"], dir.path());
    assert_eq!(code(&out), 0);
    let csv = Csv::read(&dir.path().join("coeffs.csv"));
    let freqs = csv.column("frequency");
    let mags = csv.column("abs");
    let c1 = freqs.iter().zip(&mags).find(|(f, _)| **f == 1.0).unwrap().1;
    for (f, m) in freqs.iter().zip(&mags) {
        if f.abs() != 1.0 {
            assert!(m < c1, "|c_{f}| = {m} vs |c_1| = {c1}");
        }
    }
}

#[test]
fn zero_bandwidth_extraction_is_the_sample_mean() {
    let dir = tempdir().unwrap();
    let out = run(&["coeffs", "--K", "0", "--seed", "4"], dir.path());
    assert_eq!(code(&out), 0);
    let csv = Csv::read(&dir.path().join("coeffs.csv"));
    assert_eq!(csv.rows.len(), 1);
    let cfg = ModelConfig::new(1, 3, 1).unwrap();
    let f0 = evaluate(&cfg, &ParameterSet::random_unit_gap(&cfg, 4), &[0.0]).unwrap();
    assert!((csv.column("re")[0] - f0).abs() < 1e-12);
    assert_eq!(csv.column("im")[0], 0.0);
}

#[test]
fn trotter_sweeps_and_epsilon_search() {
    let dir = tempdir().unwrap();
    let ham = dir.path().join("xz.txt");
    fs::write(&ham, "# H = X + Z\n1 X\n1 Z\n").unwrap();
    let out = run(
        &["trotter", "--hamiltonian", ham.to_str().unwrap(), "--epsilon", "1e-3"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("scaling estimate"));
    let csv = Csv::read(&dir.path().join("trotter.csv"));
    assert_eq!(csv.column("r"), [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0]);
    let errors = csv.column("error");
    assert!(errors.windows(2).all(|w| w[1] < w[0]));

    let r = csv.value("steps_for_epsilon") as usize;
    let h = PauliTermSum::parse("1 X\n1 Z").unwrap();
    let exact = exact_evolution(&h, 1.0).unwrap();
    let err = |r| evolution_error(&trotter2(&h, 1.0, r).unwrap(), &exact).unwrap();
    assert!(err(r) <= 1e-3 && err(r.div_ceil(2)) > 1e-3);
}

#[test]
fn commuting_hamiltonian_has_no_trotter_error() {
    let dir = tempdir().unwrap();
    let ham = dir.path().join("zz.txt");
    fs::write(&ham, "0.7 ZI\n-0.4 IZ\n1.1 ZZ\n").unwrap();
    let out = run(
        &["trotter", "--hamiltonian", ham.to_str().unwrap(), "--t", "2.5"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let csv = Csv::read(&dir.path().join("trotter.csv"));
    assert!(csv.column("error").iter().all(|&e| e < 1e-10));
}

#[test]
fn trotter_input_failures() {
    let dir = tempdir().unwrap();
    let missing = dir.path().join("absent.txt");
    assert_eq!(
        code(&run(
            &["trotter", "--hamiltonian", missing.to_str().unwrap()],
            dir.path()
        )),
        4
    );
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "1 XQ\n").unwrap();
    assert_eq!(
        code(&run(&["trotter", "--hamiltonian", bad.to_str().unwrap()], dir.path())),
        4
    );
}

#[test]
fn unreachable_epsilon_is_a_numeric_failure() {
    let dir = tempdir().unwrap();
    let ham = dir.path().join("xz.txt");
    fs::write(&ham, "1 X\n1 Z\n").unwrap();
    let out = run(
        &["trotter", "--hamiltonian", ham.to_str().unwrap(), "--epsilon", "1e-30"],
        dir.path(),
    );
    assert_eq!(code(&out), 3);
}

#[test]
fn json_format_mirrors_csv() {
    let dir = tempdir().unwrap();
    let args = ["coeffs", "--layers", "2", "--K", "3", "--seed", "9"];
    assert_eq!(code(&run(&args, dir.path())), 0);
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    assert_eq!(code(&run(&json_args, dir.path())), 0);

    let csv = Csv::read(&dir.path().join("coeffs.csv"));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("coeffs.json")).unwrap()).unwrap();
    assert_eq!(json["command"], "coeffs");
    assert_eq!(json["config"]["seed"], "9");
    assert_eq!(json["config"]["format"], "json");
    assert_eq!(json["columns"].as_array().unwrap().len(), csv.columns.len());
    let rows = json["rows"].as_array().unwrap();
    assert_eq!(rows.len(), csv.rows.len());
    for (row, re) in rows.iter().zip(csv.column("re")) {
        assert_eq!(row[1].as_f64().unwrap(), re);
    }
    assert_eq!(
        json["summary"]["analytic_disagreement"].as_f64().unwrap(),
        csv.value("analytic_disagreement")
    );
}

#[test]
fn output_directory_defaults_to_environment() {
    let dir = tempdir().unwrap();
    let target = dir.path().join("from-env");
    let out = qfs()
        .args(["coeffs", "--K", "1"])
        .env("QFS_OUT_DIR", &target)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(target.join("coeffs.csv").exists());

    let explicit = dir.path().join("explicit");
    let out = qfs()
        .args(["coeffs", "--K", "1", "--out"])
        .arg(&explicit)
        .env("QFS_OUT_DIR", &target)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(explicit.join("coeffs.csv").exists());
}

#[test]
fn config_file_supplies_defaults_that_flags_override() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# coefficient run\nlayers = 2\nK = 5\nseed = 3\n").unwrap();
    let out = run(
        &["coeffs", "--config", cfg.to_str().unwrap(), "--seed", "8"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = Csv::read(&dir.path().join("coeffs.csv"));
    assert_eq!(csv.header["layers"], "2");
    assert_eq!(csv.header["K"], "5");
    assert_eq!(csv.header["seed"], "8");

    fs::write(&cfg, "layers = 2\nwidth = 5\n").unwrap();
    let out = run(&["coeffs", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key 'width'"));

    let absent = dir.path().join("absent.cfg");
    assert_eq!(
        code(&run(&["coeffs", "--config", absent.to_str().unwrap()], dir.path())),
        4
    );
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempdir().unwrap();
    let b = tempdir().unwrap();
    let args = [
        "interpolate",
        "--signal",
        "sawtooth",
        "--samples",
        "16",
        "--layers",
        "2",
        "--epochs",
        "30",
        "--seed",
        "5",
    ];
    assert_eq!(code(&run(&args, a.path())), 0);
    assert_eq!(code(&run(&args, b.path())), 0);
    for name in ["interpolate.csv", "interpolate_loss.csv", "interpolate_coeffs.csv"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn help_exits_cleanly() {
    let out = qfs().arg("--help").output().unwrap();
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    for sub in ["interpolate", "classify", "coeffs", "trotter"] {
        assert!(text.contains(sub));
    }
}
