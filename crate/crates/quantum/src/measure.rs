use serde::{Deserialize, Serialize};

use crate::error::{QuantumError, Result};
use crate::linalg::{c, commutator, frobenius, identity, CMatrix};
use crate::observable::Observable;
use crate::qrf::COMMUTATION_TOL;
use crate::state::PureState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureMode {
    /// One simultaneous measurement; the observables must commute.
    Joint,
    /// Projective updates in list order.
    Sequential,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeProbability {
    /// One `±1` per observable.
    pub outcome: Vec<i8>,
    pub probability: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub post_state: Option<PureState>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub mode: MeasureMode,
    /// All `2^k` outcome tuples, `+1` before `−1`, first observable most significant.
    pub outcomes: Vec<OutcomeProbability>,
}

impl Measurement {
    pub fn probability(&self, outcome: &[i8]) -> Option<f64> {
        self.outcomes.iter().find(|o| o.outcome == outcome).map(|o| o.probability)
    }

    /// Distribution of observable `k` alone: `[P(+1), P(−1)]`.
    pub fn marginal(&self, k: usize) -> [f64; 2] {
        let mut m = [0.; 2];
        for o in &self.outcomes {
            m[(o.outcome[k] < 0) as usize] += o.probability;
        }
        m
    }
}

/// Born-rule distribution of dichotomic observables on a pure state.
pub fn measure(s: &PureState, obs: &[Observable], mode: MeasureMode) -> Result<Measurement> {
    let layout = s.layout();
    let mut full: Vec<CMatrix> = Vec::with_capacity(obs.len());
    for o in obs {
        if !o.is_dichotomic() {
            return Err(QuantumError::NotDichotomic(f64::NAN));
        }
        full.push(o.embedded(layout)?);
    }
    if mode == MeasureMode::Joint {
        for i in 0..full.len() {
            for j in i + 1..full.len() {
                let norm = frobenius(&commutator(&full[i], &full[j]));
                if norm >= COMMUTATION_TOL {
                    return Err(QuantumError::NonCodeployable { first: i, second: j, norm });
                }
            }
        }
    }
    let d = layout.dim();
    let id = identity(d);
    let projectors: Vec<[CMatrix; 2]> = full
        .iter()
        .map(|m| [(&id + m) * c(0.5, 0.), (&id - m) * c(0.5, 0.)])
        .collect();
    let k = obs.len();
    let mut outcomes = Vec::with_capacity(1 << k);
    for idx in 0..1usize << k {
        let signs: Vec<usize> = (0..k).map(|j| idx >> (k - 1 - j) & 1).collect();
        let mut v = s.amplitudes().clone();
        for (j, &sg) in signs.iter().enumerate() {
            v = &projectors[j][sg] * v;
        }
        let p = v.norm_squared();
        let post_state = match mode {
            MeasureMode::Sequential if p > 1e-15 => Some(PureState::normalized(layout.clone(), v)?),
            _ => None,
        };
        outcomes.push(OutcomeProbability {
            outcome: signs.iter().map(|&sg| if sg == 0 { 1 } else { -1 }).collect(),
            probability: p,
            post_state,
        });
    }
    Ok(Measurement { mode, outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::SystemLayout;

    fn zero() -> PureState {
        PureState::basis(SystemLayout::qubits(["a"]).unwrap(), &[0]).unwrap()
    }

    #[test]
    fn eigenstate_is_deterministic() {
        let m = measure(&zero(), &[Observable::pauli("a", 'Z').unwrap()], MeasureMode::Joint).unwrap();
        assert_eq!(m.probability(&[1]), Some(1.));
        assert_eq!(m.probability(&[-1]), Some(0.));
    }

    #[test]
    fn sequential_x_then_z_randomises_z() {
        let obs = [Observable::pauli("a", 'X').unwrap(), Observable::pauli("a", 'Z').unwrap()];
        let m = measure(&zero(), &obs, MeasureMode::Sequential).unwrap();
        for o in &m.outcomes {
            assert!((o.probability - 0.25).abs() < 1e-15, "{o:?}");
            assert!(o.post_state.is_some());
        }
        let z = m.marginal(1);
        assert!((z[0] - 0.5).abs() < 1e-15 && (z[1] - 0.5).abs() < 1e-15);
        assert!(matches!(measure(&zero(), &obs, MeasureMode::Joint), Err(QuantumError::NonCodeployable { first: 0, second: 1, .. })));
    }

    #[test]
    fn bell_zz_correlations() {
        let s = PureState::phi_plus("a", "b").unwrap();
        let obs = [Observable::pauli("a", 'Z').unwrap(), Observable::pauli("b", 'Z').unwrap()];
        let m = measure(&s, &obs, MeasureMode::Joint).unwrap();
        assert!((m.probability(&[1, 1]).unwrap() - 0.5).abs() < 1e-15);
        assert!((m.probability(&[-1, -1]).unwrap() - 0.5).abs() < 1e-15);
        assert!(m.probability(&[1, -1]).unwrap().abs() < 1e-15);
    }
}
