use serde::{Deserialize, Serialize};

use crate::model::EmpiricalModel;

pub const DISTURBANCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisturbanceWitness {
    pub observable: String,
    pub contexts: (usize, usize),
    pub outcome: String,
    pub marginals: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoDisturbanceReport {
    pub passes: bool,
    pub max_violation: f64,
    pub tolerance: f64,
    /// The pair attaining the largest discrepancy, when it is nonzero.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<DisturbanceWitness>,
}

/// Compares each observable's marginals across every pair of contexts that contain it.
pub fn check_no_disturbance(m: &EmpiricalModel, tol: f64) -> NoDisturbanceReport {
    let s = m.scenario();
    let mut worst: Option<(f64, DisturbanceWitness)> = None;
    for o in s.observable_ids() {
        let ctxs: Vec<usize> = (0..s.contexts().len()).filter(|&c| s.contexts()[c].contains(o)).collect();
        let margs: Vec<Vec<f64>> = ctxs
            .iter()
            .map(|&c| m.marginal(c, o).expect("observable in context").iter().map(|p| p.to_f64()).collect())
            .collect();
        for i in 0..ctxs.len() {
            for j in i + 1..ctxs.len() {
                for (k, outcome) in s.outcomes(o).expect("known observable").iter().enumerate() {
                    let v = (margs[i][k] - margs[j][k]).abs();
                    if v > 0. && worst.as_ref().is_none_or(|(w, _)| v > *w) {
                        worst = Some((
                            v,
                            DisturbanceWitness {
                                observable: o.clone(),
                                contexts: (ctxs[i], ctxs[j]),
                                outcome: outcome.clone(),
                                marginals: (margs[i][k], margs[j][k]),
                            },
                        ));
                    }
                }
            }
        }
    }
    let max_violation = worst.as_ref().map_or(0., |w| w.0);
    NoDisturbanceReport {
        passes: max_violation <= tol,
        max_violation,
        tolerance: tol,
        witness: worst.map(|w| w.1),
    }
}
