use qframe_quantum::linalg::{c, CVector};
use qframe_quantum::PureState;
use serde::{Deserialize, Serialize};

use crate::error::{ExperimentError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellOutcome {
    pub name: String,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub kind: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellBasisReport {
    /// `phi+`, `phi-`, `psi+`, `psi-` in that order.
    pub outcomes: Vec<BellOutcome>,
    pub annotation: Annotation,
}

/// `φ± = (|00⟩ ± |11⟩)/√2`, `ψ± = (|10⟩ ± |01⟩)/√2`, over the layout order.
pub fn bell_vectors() -> [(&'static str, CVector); 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = |a: [f64; 4]| CVector::from_iterator(4, a.iter().map(|&x| c(x * h, 0.)));
    [
        ("phi+", v([1., 0., 0., 1.])),
        ("phi-", v([1., 0., 0., -1.])),
        ("psi+", v([0., 1., 1., 0.])),
        ("psi-", v([0., -1., 1., 0.])),
    ]
}

pub fn bell_basis_measure(s: &PureState) -> Result<BellBasisReport> {
    let dims = s.layout().dims();
    if dims != [2, 2] {
        return Err(ExperimentError::NotTwoQubits(dims.to_vec()));
    }
    let outcomes = bell_vectors()
        .into_iter()
        .map(|(name, b)| BellOutcome { name: name.into(), probability: b.dotc(s.amplitudes()).norm_sqr() })
        .collect();
    let labels = s.layout().labels().join(", ");
    Ok(BellBasisReport {
        outcomes,
        annotation: Annotation {
            kind: "entangling-measurement".into(),
            detail: format!(
                "projecting onto this basis is a joint measurement of ({labels}); a device doing it must couple to both subsystems at once, \
                 e.g. CNOT then H then a computational-basis readout"
            ),
        },
    })
}
