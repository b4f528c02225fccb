use num_complex::Complex64;

use crate::error::{argument, Result};

/// A 2x2 complex matrix in row-major order.
pub type Matrix2 = [[Complex64; 2]; 2];

/// Gates understood by the simulator.
///
/// Rotations follow `R_σ(φ) = exp(-i φ σ / 2)`. Controlled gates apply their
/// base matrix to `target` when `control` is `|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Rx { target: usize, angle: f64 },
    Ry { target: usize, angle: f64 },
    Rz { target: usize, angle: f64 },
    H { target: usize },
    X { target: usize },
    Y { target: usize },
    Z { target: usize },
    Cnot { control: usize, target: usize },
    Cry { control: usize, target: usize, angle: f64 },
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl Gate {
    pub fn target(&self) -> usize {
        match *self {
            Gate::Rx { target, .. }
            | Gate::Ry { target, .. }
            | Gate::Rz { target, .. }
            | Gate::H { target }
            | Gate::X { target }
            | Gate::Y { target }
            | Gate::Z { target }
            | Gate::Cnot { target, .. }
            | Gate::Cry { target, .. } => target,
        }
    }

    pub fn control(&self) -> Option<usize> {
        match *self {
            Gate::Cnot { control, .. } | Gate::Cry { control, .. } => Some(control),
            _ => None,
        }
    }

    /// Rotation angle, for the parameterized kinds.
    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rx { angle, .. } | Gate::Ry { angle, .. } | Gate::Rz { angle, .. } | Gate::Cry { angle, .. } => {
                Some(angle)
            }
            _ => None,
        }
    }

    /// Returns a copy with the rotation angle replaced. Non-rotation gates are
    /// returned unchanged.
    pub fn with_angle(mut self, new_angle: f64) -> Self {
        match &mut self {
            Gate::Rx { angle, .. } | Gate::Ry { angle, .. } | Gate::Rz { angle, .. } | Gate::Cry { angle, .. } => {
                *angle = new_angle
            }
            _ => {}
        }
        self
    }

    /// The 2x2 matrix acting on the target qubit.
    pub fn base_matrix(&self) -> Matrix2 {
        match *self {
            Gate::Rx { angle, .. } => rx(angle),
            Gate::Ry { angle, .. } | Gate::Cry { angle, .. } => ry(angle),
            Gate::Rz { angle, .. } => rz(angle),
            Gate::H { .. } => {
                let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                [[s, s], [s, -s]]
            }
            Gate::X { .. } | Gate::Cnot { .. } => [[ZERO, ONE], [ONE, ZERO]],
            Gate::Y { .. } => [[ZERO, -Complex64::i()], [Complex64::i(), ZERO]],
            Gate::Z { .. } => [[ONE, ZERO], [ZERO, -ONE]],
        }
    }

    pub(crate) fn validate(&self, n_qubits: usize) -> Result<()> {
        let target = self.target();
        if target >= n_qubits {
            return argument(format!("gate target {target} out of range for {n_qubits} qubits"));
        }
        if let Some(control) = self.control() {
            if control >= n_qubits {
                return argument(format!("gate control {control} out of range for {n_qubits} qubits"));
            }
            if control == target {
                return argument(format!("control and target coincide on qubit {target}"));
            }
        }
        Ok(())
    }
}

pub fn rx(angle: f64) -> Matrix2 {
    let (s, c) = (angle / 2.0).sin_cos();
    let c = Complex64::new(c, 0.0);
    let m = Complex64::new(0.0, -s);
    [[c, m], [m, c]]
}

pub fn ry(angle: f64) -> Matrix2 {
    let (s, c) = (angle / 2.0).sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

pub fn rz(angle: f64) -> Matrix2 {
    let half = angle / 2.0;
    [
        [Complex64::from_polar(1.0, -half), ZERO],
        [ZERO, Complex64::from_polar(1.0, half)],
    ]
}

/// Stride of qubit `q` in the basis index; qubit 0 is the most significant bit.
#[inline]
pub(crate) fn stride(n_qubits: usize, qubit: usize) -> usize {
    1 << (n_qubits - 1 - qubit)
}

/// Applies `m` to `qubit` of a raw amplitude vector. The vector need not be
/// normalized; the update is linear.
pub fn apply_matrix2(amps: &mut [Complex64], n_qubits: usize, qubit: usize, m: &Matrix2) {
    let s = stride(n_qubits, qubit);
    for block in (0..amps.len()).step_by(2 * s) {
        for i in block..block + s {
            let a = amps[i];
            let b = amps[i + s];
            amps[i] = m[0][0] * a + m[0][1] * b;
            amps[i + s] = m[1][0] * a + m[1][1] * b;
        }
    }
}

/// Applies `m` to `target` on the subspace where `control` is set.
pub fn apply_controlled_matrix2(amps: &mut [Complex64], n_qubits: usize, control: usize, target: usize, m: &Matrix2) {
    let s = stride(n_qubits, target);
    let c = stride(n_qubits, control);
    for block in (0..amps.len()).step_by(2 * s) {
        for i in block..block + s {
            if i & c == 0 {
                continue;
            }
            let a = amps[i];
            let b = amps[i + s];
            amps[i] = m[0][0] * a + m[0][1] * b;
            amps[i + s] = m[1][0] * a + m[1][1] * b;
        }
    }
}

/// Applies a gate to a raw amplitude vector of length `2^n_qubits`.
pub fn apply_to_amplitudes(amps: &mut [Complex64], n_qubits: usize, gate: &Gate) -> Result<()> {
    if amps.len() != 1 << n_qubits {
        return argument(format!(
            "amplitude vector of length {} does not describe {n_qubits} qubits",
            amps.len()
        ));
    }
    gate.validate(n_qubits)?;
    apply_unchecked(amps, n_qubits, gate);
    Ok(())
}

pub(crate) fn apply_unchecked(amps: &mut [Complex64], n_qubits: usize, gate: &Gate) {
    match *gate {
        Gate::Cnot { control, target } => {
            let s = stride(n_qubits, target);
            let c = stride(n_qubits, control);
            for i in 0..amps.len() {
                if i & c != 0 && i & s == 0 {
                    amps.swap(i, i | s);
                }
            }
        }
        Gate::Cry { control, target, .. } => {
            apply_controlled_matrix2(amps, n_qubits, control, target, &gate.base_matrix())
        }
        _ => apply_matrix2(amps, n_qubits, gate.target(), &gate.base_matrix()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn ry_pi_matrix() {
        let m = ry(PI);
        assert!(close(m[0][1], Complex64::new(-1.0, 0.0)));
        assert!(close(m[1][0], Complex64::new(1.0, 0.0)));
        assert!(m[0][0].norm() < 1e-15);
    }

    #[test]
    fn rz_is_diagonal_half_angle() {
        let m = rz(1.0);
        assert!(close(m[0][0], Complex64::from_polar(1.0, -0.5)));
        assert!(close(m[1][1], Complex64::from_polar(1.0, 0.5)));
    }

    #[test]
    fn validation_rejects_bad_indices() {
        assert!(Gate::X { target: 2 }.validate(2).is_err());
        assert!(Gate::Cnot { control: 1, target: 1 }.validate(2).is_err());
        assert!(Gate::Cnot { control: 3, target: 0 }.validate(2).is_err());
        assert!(Gate::Cnot { control: 0, target: 1 }.validate(2).is_ok());
    }

    #[test]
    fn with_angle_only_touches_rotations() {
        let g = Gate::Ry { target: 0, angle: 0.1 }.with_angle(0.4);
        assert_eq!(g.angle(), Some(0.4));
        assert_eq!(Gate::H { target: 0 }.with_angle(1.0), Gate::H { target: 0 });
    }
}
