//! Finite channel theory: classifications, infomorphisms, diagram
//! commutativity, colimits and limits, and cone-cocone diagram checks.
//!
//! All values are immutable once constructed and every operation is a pure
//! function of its inputs.

pub mod cccd;
pub mod classification;
pub mod corpus;
pub mod diagram;
pub mod error;
pub mod infomorphism;
pub mod limits;

pub use cccd::{combined_base, merge_cores, verify_cccd, BuildError, CccdCandidate, CccdReport, CccdWitness, MergeError, NonCodeployable};
pub use classification::Classification;
pub use diagram::{check_commutes, ClassifierDiagram, CommutativityVerdict, Counterexample, PathWitness};
pub use error::ClassifierError;
pub use infomorphism::{
    compose, enumerate_infomorphisms, find_isomorphism, validate_infomorphism, Infomorphism, PropertyViolation,
    ValidationReport,
};
pub use limits::{colimit, cocones_into, cones_from, is_cocone, is_cone, limit, Colimit, Limit, UniversalCheck};
