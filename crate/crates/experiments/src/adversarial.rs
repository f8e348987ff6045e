//! Pairs of environments that an agent cannot tell apart but whose
//! entanglement entropies differ by at least one bit.

use std::fmt;
use std::str::FromStr;

use qframe_quantum::{entanglement_entropy, PureState, Qrf, SystemLayout};
use serde::{Deserialize, Serialize};

use crate::error::{ExperimentError, Result};
use crate::stats::{agent_statistics, discrepancy};

pub const DISCREPANCY_TOL: f64 = 1e-9;
pub const MIN_DELTA_S: f64 = 1.;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CatalogKey {
    /// `|φ+⟩₁₂|φ+⟩₃₄` against `|φ+⟩₁₂|00⟩₃₄`; visible sector `{1,2}`.
    DoubleBell,
    /// `|00⟩₁₂|φ+⟩₃₄` against `|0000⟩`; visible sector `{1,2}`.
    HiddenBell,
    /// `|φ+⟩₁₂|0⟩₃` against GHZ on `1,2,3`; equal entropies, so always rejected.
    GhzControl,
    /// The first family above that passes verification.
    Auto,
}

impl CatalogKey {
    pub const FAMILIES: [CatalogKey; 3] = [CatalogKey::DoubleBell, CatalogKey::HiddenBell, CatalogKey::GhzControl];

    pub fn as_str(self) -> &'static str {
        match self {
            CatalogKey::DoubleBell => "double-bell",
            CatalogKey::HiddenBell => "hidden-bell",
            CatalogKey::GhzControl => "ghz-control",
            CatalogKey::Auto => "auto",
        }
    }
}

impl fmt::Display for CatalogKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CatalogKey {
    type Err = ExperimentError;
    fn from_str(s: &str) -> Result<Self> {
        [CatalogKey::DoubleBell, CatalogKey::HiddenBell, CatalogKey::GhzControl, CatalogKey::Auto]
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| ExperimentError::UnknownKey(s.into()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    /// Largest difference in any agent probability or expectation.
    pub max_discrepancy: f64,
    pub entropy_bits: [f64; 2],
    pub delta_s: f64,
    pub components_compared: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdversarialPair {
    pub key: CatalogKey,
    pub states: [PureState; 2],
    pub agent: Vec<Qrf>,
    pub record: Verification,
}

fn family_states(key: CatalogKey) -> Result<[PureState; 2]> {
    let bell = |a, b| PureState::phi_plus(a, b);
    let zeros = |l: &[&str]| PureState::basis(SystemLayout::qubits(l.iter().copied())?, &vec![0; l.len()]);
    Ok(match key {
        CatalogKey::DoubleBell => [bell("1", "2")?.tensor(&bell("3", "4")?)?, bell("1", "2")?.tensor(&zeros(&["3", "4"])?)?],
        CatalogKey::HiddenBell => [zeros(&["1", "2"])?.tensor(&bell("3", "4")?)?, zeros(&["1", "2", "3", "4"])?],
        CatalogKey::GhzControl => [bell("1", "2")?.tensor(&zeros(&["3"])?)?, PureState::ghz(["1", "2", "3"])?],
        CatalogKey::Auto => unreachable!("auto is resolved by the caller"),
    })
}

/// Brute-force comparison of the agent's statistics on both states.
pub fn verify_pair(states: &[PureState; 2], agent: &[Qrf]) -> Result<Verification> {
    let before = agent_statistics(&states[0], agent)?;
    let after = agent_statistics(&states[1], agent)?;
    let s0 = entanglement_entropy(&states[0])?.bits;
    let s1 = entanglement_entropy(&states[1])?.bits;
    Ok(Verification {
        max_discrepancy: discrepancy(&before, &after),
        entropy_bits: [s0, s1],
        delta_s: (s0 - s1).abs(),
        components_compared: agent.len(),
    })
}

fn try_family(key: CatalogKey, agent: &[Qrf]) -> Result<AdversarialPair> {
    let rejected = |reason: String| ExperimentError::Rejected { key: key.to_string(), reason };
    let states = family_states(key)?;
    let record = match verify_pair(&states, agent) {
        Ok(r) => r,
        Err(ExperimentError::AgentOffLayout { component, label }) => {
            return Err(rejected(format!("component `{component}` reads label `{label}` outside the family")));
        }
        Err(e) => return Err(e),
    };
    if record.max_discrepancy > DISCREPANCY_TOL {
        return Err(rejected(format!("agent statistics differ by {:.3e}", record.max_discrepancy)));
    }
    if record.delta_s < MIN_DELTA_S - 1e-9 {
        return Err(rejected(format!("entropy gap {:.6} bits is below {MIN_DELTA_S}", record.delta_s)));
    }
    Ok(AdversarialPair { key, states, agent: agent.to_vec(), record })
}

/// Builds and re-verifies a pair from the catalog.
pub fn construct_adversarial_pair(agent: &[Qrf], key: CatalogKey) -> Result<AdversarialPair> {
    if key != CatalogKey::Auto {
        return try_family(key, agent);
    }
    let mut tried = Vec::new();
    for k in CatalogKey::FAMILIES {
        match try_family(k, agent) {
            Ok(p) => return Ok(p),
            Err(ExperimentError::Rejected { key, reason }) => tried.push((key, reason)),
            Err(e) => return Err(e),
        }
    }
    Err(ExperimentError::NoFamily { tried })
}
