//! Does an action change the environment's entanglement entropy, and can an
//! agent with a fixed set of frames tell?

use qframe_quantum::linalg::{cnot, hadamard, kron, matrix_from_pairs, matrix_to_pairs, pauli_x, pauli_y, pauli_z, CMatrix};
use qframe_quantum::{entanglement_entropy, Observable, PureState, QuantumError, Qrf};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::stats::{agent_statistics, discrepancy, ComponentStatistics};

/// Threshold for both the entropy change and the statistic change.
pub const CHANGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GateRepr", into = "GateRepr")]
pub struct Gate {
    pub targets: Vec<String>,
    pub matrix: CMatrix,
}

#[derive(Serialize, Deserialize)]
struct GateRepr {
    targets: Vec<String>,
    matrix: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<GateRepr> for Gate {
    type Error = QuantumError;
    fn try_from(r: GateRepr) -> std::result::Result<Self, QuantumError> {
        Ok(Gate { targets: r.targets, matrix: matrix_from_pairs(&r.matrix)? })
    }
}

impl From<Gate> for GateRepr {
    fn from(g: Gate) -> Self {
        GateRepr { targets: g.targets, matrix: matrix_to_pairs(&g.matrix) }
    }
}

impl Gate {
    pub fn new<S: Into<String>>(targets: impl IntoIterator<Item = S>, matrix: CMatrix) -> Self {
        Gate { targets: targets.into_iter().map(Into::into).collect(), matrix }
    }
}

/// Environment, agent components, and an action given as gates applied in order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QfpInstance {
    pub environment: PureState,
    pub agent: Vec<Qrf>,
    #[serde(default)]
    pub action: Vec<Gate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Changed,
    Unchanged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Correct,
    FalseNegative,
    FalsePositive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QfpTrial {
    pub agent_verdict: Verdict,
    pub ground_truth: Verdict,
    pub classification: Classification,
    pub entropy_before: f64,
    pub entropy_after: f64,
    pub delta_s: f64,
    pub statistic_discrepancy: f64,
}

/// A decision procedure from before/after statistics to a verdict.
pub type Strategy = dyn Fn(&[ComponentStatistics], &[ComponentStatistics]) -> Verdict;

/// "Changed" iff any visible probability or expectation moves by more than [`CHANGE_TOL`].
pub fn naive_stat_diff(before: &[ComponentStatistics], after: &[ComponentStatistics]) -> Verdict {
    if discrepancy(before, after) > CHANGE_TOL {
        Verdict::Changed
    } else {
        Verdict::Unchanged
    }
}

pub fn apply_action(s: &PureState, action: &[Gate]) -> Result<PureState> {
    let mut out = s.clone();
    for g in action {
        out = out.apply(&g.matrix, &g.targets)?;
    }
    Ok(out)
}

pub fn run_qfp_trial(inst: &QfpInstance, strategy: &Strategy) -> Result<QfpTrial> {
    let after_state = apply_action(&inst.environment, &inst.action)?;
    let before = agent_statistics(&inst.environment, &inst.agent)?;
    let after = agent_statistics(&after_state, &inst.agent)?;
    let s0 = entanglement_entropy(&inst.environment)?.bits;
    let s1 = entanglement_entropy(&after_state)?.bits;
    let ground_truth = if (s1 - s0).abs() > CHANGE_TOL { Verdict::Changed } else { Verdict::Unchanged };
    let agent_verdict = strategy(&before, &after);
    let classification = match (agent_verdict, ground_truth) {
        (a, t) if a == t => Classification::Correct,
        (Verdict::Unchanged, _) => Classification::FalseNegative,
        (Verdict::Changed, _) => Classification::FalsePositive,
    };
    Ok(QfpTrial {
        agent_verdict,
        ground_truth,
        classification,
        entropy_before: s0,
        entropy_after: s1,
        delta_s: s1 - s0,
        statistic_discrepancy: discrepancy(&before, &after),
    })
}

fn pauli(p: char) -> CMatrix {
    match p {
        'X' => pauli_x(),
        'Y' => pauli_y(),
        _ => pauli_z(),
    }
}

/// Nine commuting components `{P₁, Q₂, P₁Q₂}` for `P, Q ∈ {X, Y, Z}`:
/// together they fix the reduced state on `a, b`.
pub fn pauli_tomography_agent(a: &str, b: &str) -> Result<Vec<Qrf>> {
    let mut out = Vec::new();
    for p in ['X', 'Y', 'Z'] {
        for q in ['X', 'Y', 'Z'] {
            let obs = vec![
                Observable::pauli(a, p)?,
                Observable::pauli(b, q)?,
                Observable::dichotomic([a, b], kron(&pauli(p), &pauli(q)))?,
            ];
            out.push(Qrf::uniform(format!("{p}{q}"), [a, b], obs)?);
        }
    }
    Ok(out)
}

/// `|φ+⟩₁₂|00⟩₃₄`, the agent on `{1,2}`, and `H` on 3 followed by `CNOT` 3→4.
pub fn hidden_bell_instance() -> Result<QfpInstance> {
    let zeros = PureState::basis(qframe_quantum::SystemLayout::qubits(["3", "4"])?, &[0, 0])?;
    Ok(QfpInstance {
        environment: PureState::phi_plus("1", "2")?.tensor(&zeros)?,
        agent: pauli_tomography_agent("1", "2")?,
        action: vec![Gate::new(["3"], hadamard()), Gate::new(["3", "4"], cnot())],
    })
}

