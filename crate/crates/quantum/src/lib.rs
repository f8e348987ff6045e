//! Exact finite-dimensional quantum kernel: layouts, pure and mixed states,
//! dichotomic observables, reference-frame Hamiltonians and commutators,
//! partial traces, entropies and Born-rule measurement.

pub mod entropy;
pub mod error;
pub mod layout;
pub mod linalg;
pub mod measure;
pub mod observable;
pub mod qrf;
pub mod state;

pub use entropy::{
    bipartition_entropy_bits, entanglement_entropy, is_separable_pure, partial_trace, von_neumann_entropy,
    EntanglementEntropy, StateRef,
};
pub use error::{Constraint, QuantumError};
pub use layout::SystemLayout;
pub use measure::{measure, MeasureMode, Measurement, OutcomeProbability};
pub use observable::Observable;
pub use qrf::{
    build_interaction_hamiltonian, codeployable, commutator_norm, commutator_norm_in, landauer_cost, Codeployability, Qrf,
    K_B,
};
pub use state::{DensityMatrix, PureState};
