use thiserror::Error;

/// Structural problems with classifications, arrows and diagrams.
///
/// Failures of the fundamental property are not errors; they are reported
/// as violations by the validators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifierError {
    #[error("classification `{classification}`: duplicate token `{name}`")]
    DuplicateToken { classification: String, name: String },
    #[error("classification `{classification}`: duplicate type `{name}`")]
    DuplicateType { classification: String, name: String },
    #[error("classification `{classification}`: incidence must be {rows}x{cols}")]
    IncidenceShape {
        classification: String,
        rows: usize,
        cols: usize,
    },
    #[error("classification `{classification}` has no token `{name}`")]
    UnknownToken { classification: String, name: String },
    #[error("classification `{classification}` has no type `{name}`")]
    UnknownType { classification: String, name: String },
    #[error("arrow `{arrow}`: typeMap is not total, `{name}` is unmapped")]
    PartialTypeMap { arrow: String, name: String },
    #[error("arrow `{arrow}`: tokenMap is not total, `{name}` is unmapped")]
    PartialTokenMap { arrow: String, name: String },
    #[error("arrow `{arrow}`: dangling identifier `{name}` ({side})")]
    Dangling {
        arrow: String,
        name: String,
        side: &'static str,
    },
    #[error("arrow `{arrow}`: endpoint `{expected}` expected, found `{found}`")]
    EndpointMismatch {
        arrow: String,
        expected: String,
        found: String,
    },
    #[error("diagram has no node `{0}`")]
    UnknownNode(String),
    #[error("diagram has two different nodes named `{0}`")]
    DuplicateNode(String),
    #[error("arrow `{arrow}` violates the fundamental property at {count} (token, type) pair(s)")]
    InvalidArrow { arrow: String, count: usize },
    #[error("cone-cocone candidate: {0}")]
    Cccd(String),
    #[error("construction exceeds the size cap: {what} would need {needed} elements (cap {cap})")]
    TooLarge {
        what: &'static str,
        needed: u128,
        cap: u128,
    },
}
