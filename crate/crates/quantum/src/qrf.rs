use serde::{Deserialize, Serialize};

use crate::error::{Constraint, QuantumError, Result};
use crate::layout::SystemLayout;
use crate::linalg::{c, commutator, frobenius, CMatrix};
use crate::observable::Observable;

/// Boltzmann's constant in J/K.
pub const K_B: f64 = 1.380649e-23;
pub const WEIGHT_TOL: f64 = 1e-12;
pub const COMMUTATION_TOL: f64 = 1e-10;

/// A quantum reference frame: weighted dichotomic observables on a sector,
/// with an efficiency parameter `beta` and a temperature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QrfRepr", into = "QrfRepr")]
pub struct Qrf {
    id: String,
    sector: SystemLayout,
    observables: Vec<Observable>,
    weights: Vec<f64>,
    beta: f64,
    temperature: f64,
}

#[derive(Serialize, Deserialize)]
struct QrfRepr {
    id: String,
    sector: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dims: Option<Vec<usize>>,
    observables: Vec<Observable>,
    weights: Vec<f64>,
    beta: f64,
    temperature: f64,
}

impl TryFrom<QrfRepr> for Qrf {
    type Error = QuantumError;
    fn try_from(r: QrfRepr) -> Result<Self> {
        let sector = match r.dims {
            Some(d) => SystemLayout::new(r.sector, d)?,
            None => SystemLayout::qubits(r.sector)?,
        };
        Qrf::new(r.id, sector, r.observables, r.weights, r.beta, r.temperature)
    }
}

impl From<Qrf> for QrfRepr {
    fn from(q: Qrf) -> Self {
        let qubits = q.sector.dims().iter().all(|&d| d == 2);
        QrfRepr {
            id: q.id,
            sector: q.sector.labels().to_vec(),
            dims: (!qubits).then(|| q.sector.dims().to_vec()),
            observables: q.observables,
            weights: q.weights,
            beta: q.beta,
            temperature: q.temperature,
        }
    }
}

impl Qrf {
    pub fn new(
        id: impl Into<String>,
        sector: SystemLayout,
        observables: Vec<Observable>,
        weights: Vec<f64>,
        beta: f64,
        temperature: f64,
    ) -> Result<Self> {
        check_beta(beta)?;
        if !(temperature > 0.) || !temperature.is_finite() {
            return Err(Constraint::TemperatureNotPositive { temperature }.into());
        }
        if weights.len() != observables.len() {
            return Err(Constraint::WeightCount {
                observables: observables.len(),
                weights: weights.len(),
            }
            .into());
        }
        for (index, &w) in weights.iter().enumerate() {
            if !(0. ..=1.).contains(&w) {
                return Err(Constraint::WeightOutOfRange { index, weight: w }.into());
            }
        }
        let sum: f64 = weights.iter().sum();
        if !observables.is_empty() && (sum - 1.).abs() > WEIGHT_TOL {
            return Err(Constraint::WeightsDoNotSumToOne { sum }.into());
        }
        for (index, o) in observables.iter().enumerate() {
            if !o.is_dichotomic() {
                return Err(Constraint::NotDichotomic { index }.into());
            }
            for (l, &d) in o.sector().labels().iter().zip(o.sector().dims()) {
                if sector.dim_of(l) != Some(d) {
                    return Err(Constraint::OffSector { index, label: l.clone() }.into());
                }
            }
        }
        Ok(Qrf {
            id: id.into(),
            sector,
            observables,
            weights,
            beta,
            temperature,
        })
    }

    /// Equal weights, `beta = ln 2`, `T = 300 K`, qubit sector.
    pub fn uniform<S: Into<String>>(
        id: impl Into<String>,
        sector: impl IntoIterator<Item = S>,
        observables: Vec<Observable>,
    ) -> Result<Self> {
        let n = observables.len();
        let weights = vec![1. / n.max(1) as f64; n];
        Qrf::new(id, SystemLayout::qubits(sector)?, observables, weights, std::f64::consts::LN_2, 300.)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn sector(&self) -> &SystemLayout {
        &self.sector
    }

    pub fn observables(&self) -> &[Observable] {
        &self.observables
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    /// `β k_B T`, the spectral-radius bound of the interaction Hamiltonian.
    pub fn energy_scale(&self) -> f64 {
        self.beta * K_B * self.temperature
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta >= std::f64::consts::LN_2) || !beta.is_finite() {
        return Err(Constraint::BetaBelowLn2 { beta }.into());
    }
    Ok(())
}

/// `β k_B T Σ α_i M_i` over the frame's sector.
pub fn build_interaction_hamiltonian(q: &Qrf) -> Result<Observable> {
    let d = q.sector.dim();
    let mut h = CMatrix::zeros(d, d);
    for (o, &w) in q.observables.iter().zip(&q.weights) {
        h += o.embedded(&q.sector)? * c(w, 0.);
    }
    h *= c(q.energy_scale(), 0.);
    // symmetrise away rounding so the Hermiticity check is about the inputs
    let h = (&h + h.adjoint()) * c(0.5, 0.);
    Observable::new(q.sector.clone(), h, false)
}

/// Max Frobenius norm of `[M, N]` over observable pairs, on the union of the
/// two sectors.
pub fn commutator_norm(q1: &Qrf, q2: &Qrf) -> Result<f64> {
    let layout = q1.sector.union(&q2.sector)?;
    commutator_norm_in(&layout, q1, q2)
}

/// As [`commutator_norm`], with observables lifted to an explicit layout.
pub fn commutator_norm_in(layout: &SystemLayout, q1: &Qrf, q2: &Qrf) -> Result<f64> {
    Ok(max_commutator(layout, q1, q2)?.map_or(0., |(n, _, _)| n))
}

fn max_commutator(layout: &SystemLayout, q1: &Qrf, q2: &Qrf) -> Result<Option<(f64, usize, usize)>> {
    let a: Vec<CMatrix> = q1.observables.iter().map(|o| o.embedded(layout)).collect::<Result<_>>()?;
    let b: Vec<CMatrix> = q2.observables.iter().map(|o| o.embedded(layout)).collect::<Result<_>>()?;
    let mut best: Option<(f64, usize, usize)> = None;
    for (i, m) in a.iter().enumerate() {
        for (j, n) in b.iter().enumerate() {
            let v = frobenius(&commutator(m, n));
            if best.is_none_or(|(b, _, _)| v > b) {
                best = Some((v, i, j));
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Codeployability {
    pub codeployable: bool,
    pub norm: f64,
    pub tolerance: f64,
    /// Indices of the observable pair attaining the norm, when non-codeployable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(usize, usize)>,
}

pub fn codeployable(q1: &Qrf, q2: &Qrf, tol: f64) -> Result<Codeployability> {
    let layout = q1.sector.union(&q2.sector)?;
    let best = max_commutator(&layout, q1, q2)?;
    let norm = best.map_or(0., |(n, _, _)| n);
    let ok = norm < tol;
    Ok(Codeployability {
        codeployable: ok,
        norm,
        tolerance: tol,
        witness: if ok { None } else { best.map(|(_, i, j)| (i, j)) },
    })
}

/// Free energy in joules to irreversibly record `n_bits` bits.
pub fn landauer_cost(beta: f64, temperature: f64, n_bits: u64) -> Result<f64> {
    check_beta(beta)?;
    if !(temperature > 0.) || !temperature.is_finite() {
        return Err(Constraint::TemperatureNotPositive { temperature }.into());
    }
    Ok(n_bits as f64 * beta * K_B * temperature)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigenvalues_hermitian;
    use std::f64::consts::LN_2;

    fn frame(id: &str, obs: Vec<Observable>, weights: Vec<f64>, beta: f64, t: f64) -> Result<Qrf> {
        let mut labels: Vec<String> = Vec::new();
        for o in &obs {
            for l in o.labels() {
                if !labels.contains(l) {
                    labels.push(l.clone());
                }
            }
        }
        Qrf::new(id, SystemLayout::qubits(labels)?, obs, weights, beta, t)
    }

    #[test]
    fn single_z_hamiltonian_is_scaled_pauli() {
        let q = frame("q", vec![Observable::pauli("a", 'Z').unwrap()], vec![1.], LN_2, 1. / K_B).unwrap();
        let h = build_interaction_hamiltonian(&q).unwrap();
        let ev = eigenvalues_hermitian(h.matrix());
        assert!((ev[0] + LN_2).abs() < 1e-12 && (ev[1] - LN_2).abs() < 1e-12);
    }

    #[test]
    fn constraint_errors_name_the_condition() {
        let z = || vec![Observable::pauli("a", 'Z').unwrap()];
        let e = frame("q", z(), vec![1.], 0.5, 1.).unwrap_err();
        assert_eq!(e, QuantumError::Constraint(Constraint::BetaBelowLn2 { beta: 0.5 }));
        assert!(e.to_string().contains("beta >= ln 2"));
        let e = frame("q", z(), vec![0.9], LN_2, 1.).unwrap_err();
        assert!(matches!(e, QuantumError::Constraint(Constraint::WeightsDoNotSumToOne { .. })));
        let two = vec![Observable::pauli("a", 'Z').unwrap(), Observable::pauli("a", 'X').unwrap()];
        let e = frame("q", two, vec![1.5, -0.5], LN_2, 1.).unwrap_err();
        assert!(matches!(e, QuantumError::Constraint(Constraint::WeightOutOfRange { index: 0, .. })));
        assert!(matches!(
            frame("q", z(), vec![1.], LN_2, 0.).unwrap_err(),
            QuantumError::Constraint(Constraint::TemperatureNotPositive { .. })
        ));
        let off = Qrf::new("q", SystemLayout::qubits(["b"]).unwrap(), z(), vec![1.], LN_2, 1.).unwrap_err();
        assert!(matches!(off, QuantumError::Constraint(Constraint::OffSector { .. })));
    }

    #[test]
    fn landauer_examples() {
        assert_eq!(landauer_cost(LN_2, 300., 0).unwrap(), 0.);
        let one = landauer_cost(LN_2, 300., 1).unwrap();
        assert!((one - LN_2 * 300. * 1.380649e-23).abs() < 1e-35);
        assert!((one - 2.871e-21).abs() < 1e-24);
        assert!((landauer_cost(2. * LN_2, 300., 1).unwrap() - 2. * one).abs() < 1e-35);
        assert!(landauer_cost(0.5, 300., 1).is_err());
    }
}
