//! Measurement scenarios and empirical models: no-disturbance, exact or
//! floating global-section feasibility with certificates, contextual
//! fraction, CHSH, and Born-rule models built from pairs of reference frames.

pub mod bridge;
pub mod catalog;
pub mod chsh;
pub mod disturbance;
pub mod error;
pub mod lp;
pub mod model;
pub mod prob;
pub mod scenario;
pub mod section;

pub use bridge::{empirical_model_from_qrfs, linkage_corpus, DeploymentNote, QrfPairCase};
pub use chsh::{chsh_value, correlator};
pub use disturbance::{check_no_disturbance, DisturbanceWitness, NoDisturbanceReport, DISTURBANCE_TOL};
pub use error::ContextualityError;
pub use model::EmpiricalModel;
pub use prob::Prob;
pub use scenario::MeasurementScenario;
pub use section::{
    analyze, contextual_fraction, has_global_section, model_from_global, verify_section_certificate, Arithmetic,
    ContextualFraction, ContextualityReport, GlobalAssignment, GlobalSectionReport, SectionCertificate, SolveOptions,
    WeightedAssignment,
};
