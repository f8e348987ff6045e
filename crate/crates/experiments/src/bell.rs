//! Two observers measuring a shared pair, with the second observer's frame
//! rotated about the y axis.

use qframe_contextuality::catalog::chsh_scenario;
use qframe_contextuality::{analyze, chsh_value, correlator, ContextualityReport, EmpiricalModel, Prob, SolveOptions};
use qframe_quantum::linalg::{dagger, rotation_y};
use qframe_quantum::{measure, MeasureMode, Observable, PureState};
use serde::{Deserialize, Serialize};

use crate::error::{ExperimentError, Result};
use crate::rng::{categorical, seeded};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BellSetup {
    #[serde(default = "default_state")]
    pub state: PureState,
    /// First observer's two axis angles (x-z plane).
    #[serde(default = "default_a")]
    pub a_angles: [f64; 2],
    #[serde(default = "default_b")]
    pub b_angles: [f64; 2],
    /// Misalignment of the second observer's frame.
    #[serde(default)]
    pub theta: f64,
    /// Shots per context; exact Born tables when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(default)]
    pub seed: u64,
}

fn default_state() -> PureState {
    PureState::phi_plus("1", "2").expect("fixed state")
}

fn default_a() -> [f64; 2] {
    [0., std::f64::consts::FRAC_PI_2]
}

fn default_b() -> [f64; 2] {
    [std::f64::consts::FRAC_PI_4, -std::f64::consts::FRAC_PI_4]
}

impl BellSetup {
    /// `|φ+⟩` with the maximally violating settings.
    pub fn tsirelson(theta: f64) -> Self {
        BellSetup {
            state: default_state(),
            a_angles: default_a(),
            b_angles: default_b(),
            theta,
            shots: None,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let dims = self.state.layout().dims();
        if dims != [2, 2] {
            return Err(ExperimentError::NotTwoQubits(dims.to_vec()));
        }
        if !self.a_angles.iter().chain(&self.b_angles).all(|x| x.is_finite()) {
            return Err(ExperimentError::InvalidSetup("angles must be finite".into()));
        }
        if !(0. ..=std::f64::consts::PI).contains(&self.theta) {
            return Err(ExperimentError::InvalidSetup(format!("theta {} outside [0, π]", self.theta)));
        }
        if self.shots == Some(0) {
            return Err(ExperimentError::InvalidSetup("shots must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellReport {
    pub theta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    pub seed: u64,
    /// `E(a,b), E(a,b′), E(a′,b), E(a′,b′)`.
    pub correlators: [f64; 4],
    pub chsh: f64,
    pub model: EmpiricalModel,
    pub contextuality: ContextualityReport,
}

/// The second observer's observables, conjugated by the misalignment rotation.
pub fn observables(setup: &BellSetup) -> Result<([Observable; 2], [Observable; 2])> {
    let labels = setup.state.layout().labels();
    let r = rotation_y(setup.theta);
    let a = setup.a_angles.map(|phi| Observable::axis(&labels[0], phi));
    let b = setup.b_angles.map(|phi| {
        let m = &r * qframe_quantum::linalg::axis(phi) * dagger(&r);
        Observable::dichotomic([labels[1].as_str()], m)
    });
    let [a0, a1] = a;
    let [b0, b1] = b;
    Ok(([a0?, a1?], [b0?, b1?]))
}

/// Born probabilities per context, in `(a,b), (a,b′), (a′,b), (a′,b′)` order.
pub fn exact_tables(setup: &BellSetup) -> Result<Vec<Vec<f64>>> {
    setup.validate()?;
    let (a, b) = observables(setup)?;
    let mut out = Vec::with_capacity(4);
    for x in &a {
        for y in &b {
            let m = measure(&setup.state, &[x.clone(), y.clone()], MeasureMode::Joint)?;
            out.push(m.outcomes.iter().map(|o| o.probability.max(0.)).collect());
        }
    }
    Ok(out)
}

/// Relative frequencies from `shots` samples per context.
pub fn sampled_tables(exact: &[Vec<f64>], shots: u64, seed: u64) -> Vec<Vec<Prob>> {
    let mut rng = seeded(seed);
    exact
        .iter()
        .map(|p| {
            let mut counts = vec![0i64; p.len()];
            for _ in 0..shots {
                counts[categorical(&mut rng, p)] += 1;
            }
            counts.into_iter().map(|n| Prob::ratio(n, shots as i64)).collect()
        })
        .collect()
}

/// Largest per-context total-variation distance between two table sets.
pub fn total_variation(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs()).sum::<f64>() / 2.)
        .fold(0., f64::max)
}

pub fn run_bell(setup: &BellSetup) -> Result<BellReport> {
    let exact = exact_tables(setup)?;
    let tables = match setup.shots {
        Some(n) => sampled_tables(&exact, n, setup.seed),
        None => exact.iter().map(|t| t.iter().map(|&p| Prob::Float(p)).collect()).collect(),
    };
    let model = EmpiricalModel::new(chsh_scenario(), tables)?;
    let correlators = [0, 1, 2, 3].map(|c| correlator(&model, c).map(|e| e.to_f64()));
    let [e0, e1, e2, e3] = correlators;
    let contextuality = analyze(&model, &SolveOptions::default(), true)?;
    Ok(BellReport {
        theta: setup.theta,
        shots: setup.shots,
        seed: setup.seed,
        correlators: [e0?, e1?, e2?, e3?],
        chsh: chsh_value(&model)?.to_f64(),
        model,
        contextuality,
    })
}
