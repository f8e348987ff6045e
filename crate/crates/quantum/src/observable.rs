use serde::{Deserialize, Serialize};

use crate::error::{QuantumError, Result};
use crate::layout::SystemLayout;
use crate::linalg::{axis, ensure_square, hermiticity_witness, identity, matrix_from_pairs, matrix_to_pairs, max_abs, pauli_x, pauli_y, pauli_z, CMatrix};

pub const DICHOTOMY_TOL: f64 = 1e-10;
pub const OBS_HERMITIAN_TOL: f64 = 1e-12;

/// A Hermitian operator on a sector of labels (factor order as listed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ObservableRepr", into = "ObservableRepr")]
pub struct Observable {
    sector: SystemLayout,
    matrix: CMatrix,
    dichotomic: bool,
}

#[derive(Serialize, Deserialize)]
struct ObservableRepr {
    sector: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dims: Option<Vec<usize>>,
    matrix: Vec<Vec<[f64; 2]>>,
    dichotomic: bool,
}

impl TryFrom<ObservableRepr> for Observable {
    type Error = QuantumError;
    fn try_from(r: ObservableRepr) -> Result<Self> {
        let sector = match r.dims {
            Some(d) => SystemLayout::new(r.sector, d)?,
            None => SystemLayout::qubits(r.sector)?,
        };
        Observable::new(sector, matrix_from_pairs(&r.matrix)?, r.dichotomic)
    }
}

impl From<Observable> for ObservableRepr {
    fn from(o: Observable) -> Self {
        let qubits = o.sector.dims().iter().all(|&d| d == 2);
        ObservableRepr {
            sector: o.sector.labels().to_vec(),
            dims: (!qubits).then(|| o.sector.dims().to_vec()),
            matrix: matrix_to_pairs(&o.matrix),
            dichotomic: o.dichotomic,
        }
    }
}

impl Observable {
    pub fn new(sector: SystemLayout, matrix: CMatrix, dichotomic: bool) -> Result<Self> {
        if sector.is_empty() {
            return Err(QuantumError::EmptyLabels);
        }
        let n = ensure_square(&matrix)?;
        if n != sector.dim() {
            return Err(QuantumError::DimensionMismatch {
                expected: sector.dim(),
                actual: n,
            });
        }
        let (row, col, deviation) = hermiticity_witness(&matrix);
        if deviation > OBS_HERMITIAN_TOL {
            return Err(QuantumError::NotHermitian { row, col, deviation });
        }
        if dichotomic {
            let d = max_abs(&(&matrix * &matrix - identity(n)));
            if d > DICHOTOMY_TOL {
                return Err(QuantumError::NotDichotomic(d));
            }
        }
        Ok(Observable {
            sector,
            matrix,
            dichotomic,
        })
    }

    /// A dichotomic observable on qubits; fails unless `M² = I`.
    pub fn dichotomic<S: Into<String>>(labels: impl IntoIterator<Item = S>, matrix: CMatrix) -> Result<Self> {
        Observable::new(SystemLayout::qubits(labels)?, matrix, true)
    }

    /// A single-qubit Pauli observable (`'X'`, `'Y'` or `'Z'`).
    pub fn pauli(label: &str, which: char) -> Result<Self> {
        let m = match which {
            'X' | 'x' => pauli_x(),
            'Y' | 'y' => pauli_y(),
            'Z' | 'z' => pauli_z(),
            'I' | 'i' => identity(2),
            _ => return Err(QuantumError::UnknownLabel(which.to_string())),
        };
        Observable::dichotomic([label], m)
    }

    /// `cos φ · Z + sin φ · X` on one qubit.
    pub fn axis(label: &str, phi: f64) -> Result<Self> {
        Observable::dichotomic([label], axis(phi))
    }

    pub fn sector(&self) -> &SystemLayout {
        &self.sector
    }

    pub fn labels(&self) -> &[String] {
        self.sector.labels()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_dichotomic(&self) -> bool {
        self.dichotomic
    }

    /// The operator on `layout`, identity elsewhere.
    pub fn embedded(&self, layout: &SystemLayout) -> Result<CMatrix> {
        for (l, &d) in self.sector.labels().iter().zip(self.sector.dims()) {
            match layout.dim_of(l) {
                None => return Err(QuantumError::UnknownLabel(l.clone())),
                Some(e) if e != d => {
                    return Err(QuantumError::DimConflict {
                        label: l.clone(),
                        left: e,
                        right: d,
                    })
                }
                Some(_) => {}
            }
        }
        crate::linalg::embed(&self.matrix, self.sector.labels(), layout)
    }
}
