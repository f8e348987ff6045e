//! Desk-scale harnesses: misaligned Bell tests, Bell-basis readout,
//! indistinguishable environments with different entanglement, frame-problem
//! trials, and drift under unmodelled kicks.

pub mod adversarial;
pub mod bell;
pub mod bell_basis;
pub mod comm;
pub mod error;
pub mod qfp;
pub mod rng;
pub mod stats;
pub mod thermo;

pub use adversarial::{construct_adversarial_pair, verify_pair, AdversarialPair, CatalogKey, Verification};
pub use bell::{run_bell, BellReport, BellSetup};
pub use bell_basis::{bell_basis_measure, Annotation, BellBasisReport, BellOutcome};
pub use comm::{communication_error_rate, communication_error_rate_born};
pub use error::ExperimentError;
pub use qfp::{
    hidden_bell_instance, naive_stat_diff, run_qfp_trial, Classification, Gate, QfpInstance, QfpTrial, Strategy, Verdict,
};
pub use stats::{agent_statistics, ComponentStatistics};
pub use thermo::{thermo_context_demo, DriftReport};
