use qframe_quantum::QuantumError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContextualityError {
    #[error("observable `{0}` has no outcomes")]
    EmptyOutcomes(String),
    #[error("observable `{observable}` lists outcome `{outcome}` twice")]
    DuplicateOutcome { observable: String, outcome: String },
    #[error("outcome `{0}` may not contain a comma")]
    BadOutcome(String),
    #[error("observable `{0}` is not in any context")]
    Uncovered(String),
    #[error("context {0} is empty")]
    EmptyContext(usize),
    #[error("context {context} names unknown observable `{observable}`")]
    UnknownObservable { context: usize, observable: String },
    #[error("context {context} repeats observable `{observable}`")]
    RepeatedInContext { context: usize, observable: String },
    #[error("no table for context {0}")]
    MissingTable(usize),
    #[error("table key `{0}` is not a context index")]
    ExtraTable(String),
    #[error("context {context}: bad tuple key `{key}`: {reason}")]
    BadTupleKey { context: usize, key: String, reason: String },
    #[error("context {context}: probability for `{key}` is not a number or fraction: {value}")]
    BadProbability { context: usize, key: String, value: String },
    #[error("context {context}: probability for `{key}` is negative")]
    NegativeProbability { context: usize, key: String },
    #[error("context {context}: probabilities sum to {sum}")]
    NotNormalized { context: usize, sum: String },
    #[error("{needed} global assignments exceed the cap of {cap}")]
    TooLarge { needed: u128, cap: u128 },
    #[error("exact arithmetic requested but the model has floating-point entries")]
    NotExact,
    #[error("not the 2x2x2 Bell scenario: {0}")]
    NotChshScenario(String),
    #[error("observables {first} and {second} do not commute (norm {norm})")]
    NonCodeployable { first: String, second: String, norm: f64 },
    #[error("simplex iteration limit reached")]
    IterationLimit,
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

pub type Result<T> = std::result::Result<T, ContextualityError>;
