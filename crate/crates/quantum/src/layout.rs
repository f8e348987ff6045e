use serde::{Deserialize, Serialize};

use crate::error::{QuantumError, Result};

/// Ordered tensor factors. Basis index is big-endian: the first label is the
/// most significant digit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LayoutRepr", into = "LayoutRepr")]
pub struct SystemLayout {
    labels: Vec<String>,
    dims: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct LayoutRepr {
    labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dims: Option<Vec<usize>>,
}

impl TryFrom<LayoutRepr> for SystemLayout {
    type Error = QuantumError;
    fn try_from(r: LayoutRepr) -> Result<Self> {
        match r.dims {
            Some(d) => SystemLayout::new(r.labels, d),
            None => SystemLayout::qubits(r.labels),
        }
    }
}

impl From<SystemLayout> for LayoutRepr {
    fn from(l: SystemLayout) -> Self {
        LayoutRepr {
            labels: l.labels,
            dims: Some(l.dims),
        }
    }
}

impl SystemLayout {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>, dims: Vec<usize>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != dims.len() {
            return Err(QuantumError::DimsLength {
                labels: labels.len(),
                dims: dims.len(),
            });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(QuantumError::DuplicateLabel(l.clone()));
            }
            if dims[i] < 2 {
                return Err(QuantumError::BadDim {
                    label: l.clone(),
                    dim: dims[i],
                });
            }
        }
        Ok(SystemLayout { labels, dims })
    }

    pub fn qubits<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let dims = vec![2; labels.len()];
        SystemLayout::new(labels, dims)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Total dimension (1 for the empty layout).
    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn dim_of(&self, label: &str) -> Option<usize> {
        self.position(label).map(|i| self.dims[i])
    }

    pub fn positions<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            let l = l.as_ref();
            let p = self.position(l).ok_or_else(|| QuantumError::UnknownLabel(l.to_string()))?;
            if out.contains(&p) {
                return Err(QuantumError::DuplicateLabel(l.to_string()));
            }
            out.push(p);
        }
        Ok(out)
    }

    /// The sub-layout on `labels`, in the order given.
    pub fn sub<S: AsRef<str>>(&self, labels: &[S]) -> Result<SystemLayout> {
        let pos = self.positions(labels)?;
        Ok(SystemLayout {
            labels: pos.iter().map(|&p| self.labels[p].clone()).collect(),
            dims: pos.iter().map(|&p| self.dims[p]).collect(),
        })
    }

    /// Labels of `self` followed by the labels of `other` not already present.
    pub fn union(&self, other: &SystemLayout) -> Result<SystemLayout> {
        let mut out = self.clone();
        for (l, &d) in other.labels.iter().zip(&other.dims) {
            match self.dim_of(l) {
                Some(e) if e != d => {
                    return Err(QuantumError::DimConflict {
                        label: l.clone(),
                        left: e,
                        right: d,
                    })
                }
                Some(_) => {}
                None => {
                    out.labels.push(l.clone());
                    out.dims.push(d);
                }
            }
        }
        Ok(out)
    }

    /// Digits of a basis index, one per label.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut d = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            d[k] = index % self.dims[k];
            index /= self.dims[k];
        }
        d
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.dims).fold(0, |acc, (&d, &n)| acc * n + d)
    }

    /// For every basis index, its index within the factor on `positions`
    /// (in that order) and within the complementary factor (layout order).
    pub(crate) fn split(&self, positions: &[usize]) -> Vec<(usize, usize)> {
        let rest: Vec<usize> = (0..self.len()).filter(|p| !positions.contains(p)).collect();
        (0..self.dim())
            .map(|i| {
                let d = self.digits(i);
                let a = positions.iter().fold(0, |acc, &p| acc * self.dims[p] + d[p]);
                let b = rest.iter().fold(0, |acc, &p| acc * self.dims[p] + d[p]);
                (a, b)
            })
            .collect()
    }
}
