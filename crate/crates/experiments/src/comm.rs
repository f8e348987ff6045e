//! Bit error rate of a z-basis channel between two misaligned frames.

use qframe_quantum::linalg::{axis, dagger, pauli_z, rotation_y};
use qframe_quantum::{measure, MeasureMode, Observable, PureState, SystemLayout};

use crate::error::{ExperimentError, Result};

fn check(theta: f64) -> Result<()> {
    if (0. ..=std::f64::consts::PI).contains(&theta) {
        Ok(())
    } else {
        Err(ExperimentError::InvalidSetup(format!("theta {theta} outside [0, π]")))
    }
}

/// `sin²(θ/2)`.
pub fn communication_error_rate(theta: f64) -> Result<f64> {
    check(theta)?;
    Ok((theta / 2.).sin().powi(2))
}

/// The same rate from the Born rule: encode `0` as `|0⟩`, decode with the
/// rotated `Z`, and read off the probability of the wrong outcome.
pub fn communication_error_rate_born(theta: f64) -> Result<f64> {
    check(theta)?;
    let s = PureState::basis(SystemLayout::qubits(["q"])?, &[0])?;
    let r = rotation_y(theta);
    let decoder = Observable::dichotomic(["q"], &r * pauli_z() * dagger(&r))?;
    debug_assert!((decoder.matrix() - axis(theta)).norm() < 1e-12);
    Ok(measure(&s, &[decoder], MeasureMode::Joint)?.marginal(0)[1])
}
