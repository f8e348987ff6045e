use thiserror::Error;

/// A violated condition on the parameters of a reference-frame Hamiltonian.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Constraint {
    #[error("beta >= ln 2 (got {beta})")]
    BetaBelowLn2 { beta: f64 },
    #[error("temperature > 0 (got {temperature})")]
    TemperatureNotPositive { temperature: f64 },
    #[error("weight {index} in [0, 1] (got {weight})")]
    WeightOutOfRange { index: usize, weight: f64 },
    #[error("weights sum to 1 (got {sum})")]
    WeightsDoNotSumToOne { sum: f64 },
    #[error("one weight per observable ({observables} observables, {weights} weights)")]
    WeightCount { observables: usize, weights: usize },
    #[error("observable {index} has eigenvalues in {{-1, 1}}")]
    NotDichotomic { index: usize },
    #[error("observable {index} is supported on the sector (label `{label}` is outside it)")]
    OffSector { index: usize, label: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("label `{label}` has local dimension {dim}; at least 2 is required")]
    BadDim { label: String, dim: usize },
    #[error("{labels} labels but {dims} local dimensions")]
    DimsLength { labels: usize, dims: usize },
    #[error("label `{label}` has dimension {left} in one layout and {right} in the other")]
    DimConflict { label: String, left: usize, right: usize },
    #[error("expected dimension {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("state norm is {0}, expected 1")]
    NotNormalized(f64),
    #[error("matrix is not Hermitian: entry ({row}, {col}) differs from the conjugate of ({col}, {row}) by {deviation}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },
    #[error("matrix is not positive semidefinite (smallest eigenvalue {0})")]
    NotPsd(f64),
    #[error("trace is {0}, expected 1")]
    TraceNotOne(f64),
    #[error("matrix is not unitary (max deviation {0})")]
    NotUnitary(f64),
    #[error("observable is not dichotomic (max deviation of M^2 from I is {0})")]
    NotDichotomic(f64),
    #[error("constraint violated: {0}")]
    Constraint(#[from] Constraint),
    #[error("label set is empty")]
    EmptyLabels,
    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),
    #[error("entanglement entropy needs at least two labels")]
    SingleLabel,
    #[error("observables {first} and {second} do not commute (norm {norm})")]
    NonCodeployable { first: usize, second: usize, norm: f64 },
}

pub type Result<T> = std::result::Result<T, QuantumError>;
