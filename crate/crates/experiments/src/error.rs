use qframe_contextuality::ContextualityError;
use qframe_quantum::QuantumError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Contextuality(#[from] ContextualityError),
    #[error("invalid setup: {0}")]
    InvalidSetup(String),
    #[error("expected a two-qubit state, got subsystem dims {0:?}")]
    NotTwoQubits(Vec<usize>),
    #[error("component `{component}` has noncommuting observables ({first}, {second})")]
    ComponentNotCommuting { component: String, first: usize, second: usize },
    #[error("label `{label}` of component `{component}` is not in the environment")]
    AgentOffLayout { component: String, label: String },
    #[error("unknown catalog key `{0}`")]
    UnknownKey(String),
    #[error("family `{key}` rejected: {reason}")]
    Rejected { key: String, reason: String },
    #[error("no catalog family defeats the agent ({})", .tried.iter().map(|(k, r)| format!("{k}: {r}")).collect::<Vec<_>>().join("; "))]
    NoFamily { tried: Vec<(String, String)> },
}

pub type Result<T> = std::result::Result<T, ExperimentError>;
