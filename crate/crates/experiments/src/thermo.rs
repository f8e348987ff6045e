//! Agent-visible drift under a seeded random kick `exp(−iεG)` between
//! preparation and measurement.

use qframe_quantum::linalg::{c, dagger, eigenvalues_hermitian, exp_i_hermitian, CMatrix};
use qframe_quantum::{PureState, Qrf};
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{ExperimentError, Result};
use crate::rng::{seeded, SplitMix64};
use crate::stats::{agent_statistics, discrepancy};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    pub epsilon: f64,
    pub seed: u64,
    pub trials: usize,
    /// Largest change of any agent probability or expectation over all trials.
    pub drift: f64,
    pub per_trial: Vec<f64>,
    /// `min(2, 2ε)`: with `‖G‖ = 1`, `‖(U − I)ψ‖ ≤ ε`, so no statistic of a
    /// norm-one operator moves by more than `2ε`.
    pub bound: f64,
}

/// Hermitian with Gaussian entries, scaled to unit operator norm.
pub fn random_hermitian(rng: &mut SplitMix64, d: usize) -> CMatrix {
    let mut x = CMatrix::zeros(d, d);
    for v in x.iter_mut() {
        *v = c(rng.sample(StandardNormal), rng.sample(StandardNormal));
    }
    let h = (&x + dagger(&x)) * c(0.5, 0.);
    let norm = eigenvalues_hermitian(&h).iter().fold(0f64, |m, e| m.max(e.abs()));
    h * c(1. / norm, 0.)
}

pub fn thermo_context_demo(base: &PureState, agent: &[Qrf], epsilon: f64, seed: u64, trials: usize) -> Result<DriftReport> {
    if !(epsilon >= 0.) || !epsilon.is_finite() {
        return Err(ExperimentError::InvalidSetup(format!("epsilon {epsilon} must be finite and nonnegative")));
    }
    if trials == 0 {
        return Err(ExperimentError::InvalidSetup("trials must be positive".into()));
    }
    let baseline = agent_statistics(base, agent)?;
    let labels = base.layout().labels().to_vec();
    let mut rng = seeded(seed);
    let mut per_trial = Vec::with_capacity(trials);
    for _ in 0..trials {
        // the draw happens even at ε = 0 so every ε sees the same generators
        let g = random_hermitian(&mut rng, base.layout().dim());
        let d = if epsilon == 0. {
            0.
        } else {
            let kicked = base.apply(&exp_i_hermitian(&g, epsilon), &labels)?;
            discrepancy(&baseline, &agent_statistics(&kicked, agent)?)
        };
        per_trial.push(d);
    }
    Ok(DriftReport {
        epsilon,
        seed,
        trials,
        drift: per_trial.iter().copied().fold(0., f64::max),
        per_trial,
        bound: (2. * epsilon).min(2.),
    })
}
