//! What an agent can see: per-component joint outcome distributions and
//! expectation values.

use qframe_quantum::{measure, MeasureMode, PureState, Qrf, QuantumError};
use serde::{Deserialize, Serialize};

use crate::error::{ExperimentError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentStatistics {
    pub component: String,
    /// Joint outcome distribution, `+1` first, first observable most significant.
    pub probabilities: Vec<f64>,
    pub expectations: Vec<f64>,
}

/// Statistics of every component, each measured jointly on `s`.
pub fn agent_statistics(s: &PureState, agent: &[Qrf]) -> Result<Vec<ComponentStatistics>> {
    agent
        .iter()
        .map(|q| {
            for o in q.observables() {
                if let Some(l) = o.labels().iter().find(|l| s.layout().position(l).is_none()) {
                    return Err(ExperimentError::AgentOffLayout { component: q.id().into(), label: l.clone() });
                }
            }
            let m = measure(s, q.observables(), MeasureMode::Joint).map_err(|e| match e {
                QuantumError::NonCodeployable { first, second, .. } => {
                    ExperimentError::ComponentNotCommuting { component: q.id().into(), first, second }
                }
                e => e.into(),
            })?;
            let expectations = q
                .observables()
                .iter()
                .map(|o| Ok(s.expectation(o.matrix(), o.labels())?.re))
                .collect::<Result<_>>()?;
            Ok(ComponentStatistics {
                component: q.id().into(),
                probabilities: m.outcomes.iter().map(|o| o.probability).collect(),
                expectations,
            })
        })
        .collect()
}

/// Largest absolute difference between matching entries.
pub fn discrepancy(a: &[ComponentStatistics], b: &[ComponentStatistics]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| {
            let p = x.probabilities.iter().zip(&y.probabilities);
            let e = x.expectations.iter().zip(&y.expectations);
            p.chain(e).map(|(u, v)| (u - v).abs())
        })
        .fold(0., f64::max)
}
