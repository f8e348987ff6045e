use qframe_quantum::{codeployable, measure, Codeployability, MeasureMode, Observable, PureState, Qrf, QuantumError};
use serde::{Deserialize, Serialize};

use crate::error::{ContextualityError, Result};
use crate::model::EmpiricalModel;
use crate::prob::Prob;
use crate::scenario::MeasurementScenario;

pub const COMMUTATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeploymentNote {
    pub mode: MeasureMode,
    /// Measurement order within each pair context, in sequential mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    pub codeployability: Codeployability,
    /// Cross pairs whose operators do not commute, with the commutator norm.
    pub noncommuting_pairs: Vec<(String, String, f64)>,
    /// Singleton contexts added so that order effects show up as disturbance.
    pub singleton_contexts: bool,
}

fn ids(q1: &Qrf, q2: &Qrf) -> (Vec<String>, Vec<String>) {
    let (p1, p2) = if q1.id() == q2.id() {
        (format!("{}#1", q1.id()), format!("{}#2", q2.id()))
    } else {
        (q1.id().to_string(), q2.id().to_string())
    };
    (
        (0..q1.observables().len()).map(|i| format!("{p1}:{i}")).collect(),
        (0..q2.observables().len()).map(|j| format!("{p2}:{j}")).collect(),
    )
}

fn table(s: &PureState, obs: &[Observable], mode: MeasureMode) -> std::result::Result<Vec<Prob>, QuantumError> {
    Ok(measure(s, obs, mode)?
        .outcomes
        .into_iter()
        .map(|o| Prob::Float(o.probability.max(0.)))
        .collect())
}

/// Born-rule model with a context for every cross pair `(q1_i, q2_j)`.
/// Sequential mode measures `q1_i` first and also adds a singleton context
/// for every observable.
pub fn empirical_model_from_qrfs(s: &PureState, q1: &Qrf, q2: &Qrf, mode: MeasureMode) -> Result<(EmpiricalModel, DeploymentNote)> {
    let (id1, id2) = ids(q1, q2);
    let cod = codeployable(q1, q2, COMMUTATION_TOL)?;
    let layout = s.layout();
    let mut noncommuting = Vec::new();
    for (i, m) in q1.observables().iter().enumerate() {
        let a = m.embedded(layout)?;
        for (j, n) in q2.observables().iter().enumerate() {
            let b = n.embedded(layout)?;
            let norm = qframe_quantum::linalg::frobenius(&qframe_quantum::linalg::commutator(&a, &b));
            if norm >= COMMUTATION_TOL {
                noncommuting.push((id1[i].clone(), id2[j].clone(), norm));
            }
        }
    }
    if mode == MeasureMode::Joint {
        if let Some((a, b, norm)) = noncommuting.first() {
            return Err(ContextualityError::NonCodeployable {
                first: a.clone(),
                second: b.clone(),
                norm: *norm,
            });
        }
    }
    let pm = || vec!["1".to_string(), "-1".to_string()];
    let observables = id1.iter().chain(&id2).map(|o| (o.clone(), pm())).collect();
    let mut contexts = Vec::new();
    let mut tables = Vec::new();
    for (i, m) in q1.observables().iter().enumerate() {
        for (j, n) in q2.observables().iter().enumerate() {
            contexts.push(vec![id1[i].clone(), id2[j].clone()]);
            tables.push(table(s, &[m.clone(), n.clone()], mode)?);
        }
    }
    let singletons = mode == MeasureMode::Sequential;
    if singletons {
        for (id, o) in id1.iter().zip(q1.observables()).chain(id2.iter().zip(q2.observables())) {
            contexts.push(vec![id.clone()]);
            tables.push(table(s, std::slice::from_ref(o), mode)?);
        }
    }
    let scenario = MeasurementScenario::new(observables, contexts)?;
    let model = EmpiricalModel::new(scenario, tables)?;
    Ok((
        model,
        DeploymentNote {
            mode,
            order: singletons.then(|| format!("{} then {}", q1.id(), q2.id())),
            codeployability: cod,
            noncommuting_pairs: noncommuting,
            singleton_contexts: singletons,
        },
    ))
}

/// A bundled frame pair with the state and mode it is deployed in.
#[derive(Debug, Clone)]
pub struct QrfPairCase {
    pub name: String,
    pub state: PureState,
    pub q1: Qrf,
    pub q2: Qrf,
    pub mode: MeasureMode,
}

fn frame(id: &str, labels: &[&str], obs: Vec<Observable>) -> Qrf {
    Qrf::uniform(id, labels.iter().copied(), obs).expect("bundled frame")
}

fn pauli(label: &str, p: char) -> Observable {
    Observable::pauli(label, p).expect("bundled observable")
}

fn axis(label: &str, phi: f64) -> Observable {
    Observable::axis(label, phi).expect("bundled observable")
}

fn qubits(labels: &[&str]) -> qframe_quantum::SystemLayout {
    qframe_quantum::SystemLayout::qubits(labels.iter().copied()).expect("bundled layout")
}

fn real_state(labels: &[&str], amps: &[f64]) -> PureState {
    PureState::from_real(qubits(labels), amps).expect("bundled state")
}

/// One qubit with Bloch vector at angle `psi` in the x-z plane.
fn bloch(psi: f64) -> PureState {
    real_state(&["1"], &[(psi / 2.).cos(), (psi / 2.).sin()])
}

/// Frame pairs used to link co-deployability with contextuality verdicts.
/// Noncommuting pairs share a sector and run in sequential mode; commuting
/// ones run in joint mode.
pub fn linkage_corpus() -> Vec<QrfPairCase> {
    use std::f64::consts::{FRAC_PI_2 as H, FRAC_PI_3, FRAC_PI_4 as Q, FRAC_PI_6, PI};
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::new();
    let mut push = |name: &str, state: PureState, q1: Qrf, q2: Qrf, mode| {
        out.push(QrfPairCase { name: name.to_string(), state, q1, q2, mode });
    };

    // single-qubit axes measured one after the other: (state angle, first, second)
    let tilts = [
        (H, 0., H),
        (0., FRAC_PI_3, 0.),
        (Q, 0., H),
        (FRAC_PI_3, H, PI),
        (PI, Q, -Q),
        (2.0, 0.5, 1.7),
        (-H, FRAC_PI_6, H + 0.2),
        (H, H + 0.3, 0.),
        (1.0, -1.0, 0.4),
    ];
    for (k, &(psi, a, b)) in tilts.iter().enumerate() {
        push(
            &format!("axis-pair-{k}"),
            bloch(psi),
            frame("A", &["1"], vec![axis("1", a)]),
            frame("B", &["1"], vec![axis("1", b)]),
            MeasureMode::Sequential,
        );
    }
    push(
        "crossed-two-qubit",
        real_state(&["1", "2"], &[r, 0., r, 0.]),
        frame("A", &["1", "2"], vec![pauli("1", 'Z'), pauli("2", 'X')]),
        frame("B", &["1", "2"], vec![pauli("1", 'X'), pauli("2", 'Z')]),
        MeasureMode::Sequential,
    );
    push(
        "zz-then-xx-on-plus-plus",
        real_state(&["1", "2"], &[0.5; 4]),
        frame("A", &["1", "2"], vec![pauli("1", 'Z'), pauli("2", 'Z')]),
        frame("B", &["1", "2"], vec![pauli("1", 'X'), pauli("2", 'X')]),
        MeasureMode::Sequential,
    );

    let bell = || PureState::phi_plus("1", "2").expect("bundled state");
    let ghz = || PureState::ghz(["1", "2", "3"]).expect("bundled state");
    push(
        "product-local",
        PureState::basis(qubits(&["1", "2"]), &[0, 1]).expect("bundled state"),
        frame("A", &["1"], vec![pauli("1", 'Z')]),
        frame("B", &["2"], vec![pauli("2", 'Z'), pauli("2", 'X')]),
        MeasureMode::Joint,
    );
    push("bell-zz", bell(), frame("A", &["1"], vec![pauli("1", 'Z')]), frame("B", &["2"], vec![pauli("2", 'Z')]), MeasureMode::Joint);
    push("bell-xx", bell(), frame("A", &["1"], vec![pauli("1", 'X')]), frame("B", &["2"], vec![pauli("2", 'X')]), MeasureMode::Joint);
    push(
        "bell-star",
        bell(),
        frame("A", &["1"], vec![pauli("1", 'Z'), pauli("1", 'X')]),
        frame("B", &["2"], vec![pauli("2", 'Z')]),
        MeasureMode::Joint,
    );
    for (k, &(a, b1, b2)) in [(0., Q, -Q), (H, 0.3, 1.1), (0.7, -0.2, 2.5)].iter().enumerate() {
        push(
            &format!("bell-axis-star-{k}"),
            bell(),
            frame("A", &["1"], vec![axis("1", a)]),
            frame("B", &["2"], vec![axis("2", b1), axis("2", b2)]),
            MeasureMode::Joint,
        );
    }
    push(
        "ghz-z",
        ghz(),
        frame("A", &["1"], vec![pauli("1", 'Z')]),
        frame("B", &["2", "3"], vec![pauli("2", 'Z'), pauli("3", 'Z')]),
        MeasureMode::Joint,
    );
    push(
        "ghz-x",
        ghz(),
        frame("A", &["1"], vec![pauli("1", 'X')]),
        frame("B", &["2", "3"], vec![pauli("2", 'X'), pauli("3", 'X')]),
        MeasureMode::Joint,
    );
    push(
        "plus-zero",
        real_state(&["1", "2"], &[r, 0., r, 0.]),
        frame("A", &["1"], vec![pauli("1", 'X')]),
        frame("B", &["2"], vec![pauli("2", 'Z'), axis("2", 1.0)]),
        MeasureMode::Joint,
    );
    out
}
