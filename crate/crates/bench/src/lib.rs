//! Fixtures shared by the criterion benches.

use qfs_core::{ModelConfig, ParameterSet};

/// The 2-qubit, 6-layer classifier shape.
pub fn classifier_model() -> (ModelConfig, ParameterSet) {
    let config = ModelConfig::new(2, 6, 2).expect("valid model");
    let params = ParameterSet::init(&config, 7);
    (config, params)
}

/// A deep single-qubit interpolation model.
pub fn interpolation_model(layers: usize) -> (ModelConfig, ParameterSet) {
    let config = ModelConfig::new(1, layers, 1).expect("valid model");
    let params = ParameterSet::init(&config, 7);
    (config, params)
}

/// Circle points for gradient benchmarks.
pub fn circle_points(n: usize) -> qfs_core::datasets::LabeledDataset {
    qfs_core::datasets::generate_classification(qfs_core::datasets::ShapeKind::Circle, n, 11).expect("valid dataset")
}
