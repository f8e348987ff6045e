use serde::{Deserialize, Serialize};

use crate::error::{QuantumError, Result};
use crate::layout::SystemLayout;
use crate::linalg::{c, embed, ensure_square, hermiticity_witness, eigenvalues_hermitian, unitarity_defect, CMatrix, CVector, C64};

pub const NORM_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PureRepr", into = "PureRepr")]
pub struct PureState {
    layout: SystemLayout,
    amplitudes: CVector,
}

#[derive(Serialize, Deserialize)]
struct PureRepr {
    layout: SystemLayout,
    amplitudes: Vec<[f64; 2]>,
}

impl TryFrom<PureRepr> for PureState {
    type Error = QuantumError;
    fn try_from(r: PureRepr) -> Result<Self> {
        let v = CVector::from_iterator(r.amplitudes.len(), r.amplitudes.iter().map(|a| c(a[0], a[1])));
        PureState::new(r.layout, v)
    }
}

impl From<PureState> for PureRepr {
    fn from(s: PureState) -> Self {
        PureRepr {
            amplitudes: s.amplitudes.iter().map(|z| [z.re, z.im]).collect(),
            layout: s.layout,
        }
    }
}

impl PureState {
    pub fn new(layout: SystemLayout, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != layout.dim() {
            return Err(QuantumError::DimensionMismatch {
                expected: layout.dim(),
                actual: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.).abs() > NORM_TOL {
            return Err(QuantumError::NotNormalized(norm));
        }
        Ok(PureState { layout, amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(layout: SystemLayout, amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0. || !norm.is_finite() {
            return Err(QuantumError::NotNormalized(norm));
        }
        PureState::new(layout, amplitudes.unscale(norm))
    }

    pub fn from_real(layout: SystemLayout, amplitudes: &[f64]) -> Result<Self> {
        let v = CVector::from_iterator(amplitudes.len(), amplitudes.iter().map(|&a| c(a, 0.)));
        PureState::new(layout, v)
    }

    /// The computational basis vector with the given digits.
    pub fn basis(layout: SystemLayout, digits: &[usize]) -> Result<Self> {
        if digits.len() != layout.len() {
            return Err(QuantumError::DimensionMismatch {
                expected: layout.len(),
                actual: digits.len(),
            });
        }
        if let Some((k, _)) = digits.iter().zip(layout.dims()).enumerate().find(|(_, (d, n))| d >= n) {
            return Err(QuantumError::BadDim {
                label: layout.labels()[k].clone(),
                dim: layout.dims()[k],
            });
        }
        let mut v = CVector::zeros(layout.dim());
        v[layout.index(digits)] = c(1., 0.);
        PureState::new(layout, v)
    }

    /// `(|00⟩ + |11⟩)/√2` on two qubits.
    pub fn phi_plus(a: &str, b: &str) -> Result<Self> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState::from_real(SystemLayout::qubits([a, b])?, &[h, 0., 0., h])
    }

    /// `(|0…0⟩ + |1…1⟩)/√2` on qubits.
    pub fn ghz<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let layout = SystemLayout::qubits(labels)?;
        let mut v = CVector::zeros(layout.dim());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        v[0] = c(h, 0.);
        v[layout.dim() - 1] = c(h, 0.);
        PureState::new(layout, v)
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// `self ⊗ other` over the concatenated layout.
    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        for l in other.layout.labels() {
            if self.layout.position(l).is_some() {
                return Err(QuantumError::DuplicateLabel(l.clone()));
            }
        }
        let layout = self.layout.union(&other.layout)?;
        let v = self.amplitudes.kronecker(&other.amplitudes);
        let norm = v.norm();
        PureState::new(layout, v.unscale(norm))
    }

    /// Applies a unitary acting on `labels`.
    pub fn apply<S: AsRef<str>>(&self, unitary: &CMatrix, labels: &[S]) -> Result<Self> {
        let defect = unitarity_defect(unitary);
        if defect > 1e-10 {
            return Err(QuantumError::NotUnitary(defect));
        }
        let full = embed(unitary, labels, &self.layout)?;
        let v = full * &self.amplitudes;
        let norm = v.norm();
        PureState::new(self.layout.clone(), v.unscale(norm))
    }

    /// `⟨ψ|O|ψ⟩` for an operator on `labels`.
    pub fn expectation<S: AsRef<str>>(&self, op: &CMatrix, labels: &[S]) -> Result<C64> {
        let full = embed(op, labels, &self.layout)?;
        Ok(self.amplitudes.dotc(&(full * &self.amplitudes)))
    }

    /// The same vector with the factors reordered to `labels`.
    pub fn reorder<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        if labels.len() != self.layout.len() {
            return Err(QuantumError::DimensionMismatch {
                expected: self.layout.len(),
                actual: labels.len(),
            });
        }
        let pos = self.layout.positions(labels)?;
        let target = self.layout.sub(labels)?;
        let split = self.layout.split(&pos);
        let mut v = CVector::zeros(self.layout.dim());
        for (i, &(a, _)) in split.iter().enumerate() {
            v[a] = self.amplitudes[i];
        }
        PureState::new(target, v)
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            layout: self.layout.clone(),
            matrix: &self.amplitudes * self.amplitudes.adjoint(),
        }
    }

    /// `|⟨a|b⟩|²`, after aligning factor order.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        let o = other.reorder(self.layout.labels())?;
        if o.layout != self.layout {
            return Err(QuantumError::DimensionMismatch {
                expected: self.layout.dim(),
                actual: other.layout.dim(),
            });
        }
        Ok(self.amplitudes.dotc(&o.amplitudes).norm_sqr())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityRepr", into = "DensityRepr")]
pub struct DensityMatrix {
    layout: SystemLayout,
    matrix: CMatrix,
}

#[derive(Serialize, Deserialize)]
struct DensityRepr {
    layout: SystemLayout,
    matrix: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<DensityRepr> for DensityMatrix {
    type Error = QuantumError;
    fn try_from(r: DensityRepr) -> Result<Self> {
        DensityMatrix::new(r.layout, crate::linalg::matrix_from_pairs(&r.matrix)?)
    }
}

impl From<DensityMatrix> for DensityRepr {
    fn from(d: DensityMatrix) -> Self {
        DensityRepr {
            matrix: crate::linalg::matrix_to_pairs(&d.matrix),
            layout: d.layout,
        }
    }
}

impl DensityMatrix {
    pub fn new(layout: SystemLayout, matrix: CMatrix) -> Result<Self> {
        let n = ensure_square(&matrix)?;
        if n != layout.dim() {
            return Err(QuantumError::DimensionMismatch {
                expected: layout.dim(),
                actual: n,
            });
        }
        let (row, col, deviation) = hermiticity_witness(&matrix);
        if deviation > HERMITIAN_TOL {
            return Err(QuantumError::NotHermitian { row, col, deviation });
        }
        let tr = matrix.trace();
        if (tr.re - 1.).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(QuantumError::TraceNotOne(tr.re));
        }
        let min = eigenvalues_hermitian(&matrix).first().copied().unwrap_or(0.);
        if min < -PSD_TOL {
            return Err(QuantumError::NotPsd(min));
        }
        Ok(DensityMatrix { layout, matrix })
    }

    /// The maximally mixed state `I/d`.
    pub fn maximally_mixed(layout: SystemLayout) -> Self {
        let d = layout.dim();
        DensityMatrix {
            matrix: CMatrix::identity(d, d).unscale(d as f64),
            layout,
        }
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub(crate) fn from_parts_unchecked(layout: SystemLayout, matrix: CMatrix) -> Self {
        DensityMatrix { layout, matrix }
    }
}
