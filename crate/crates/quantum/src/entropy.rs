use serde::{Deserialize, Serialize};

use crate::error::{QuantumError, Result};
use crate::layout::SystemLayout;
use crate::linalg::{c, eigenvalues_hermitian, CMatrix};
use crate::state::{DensityMatrix, PureState};

pub const SCHMIDT_TOL: f64 = 1e-10;
const TIE_TOL: f64 = 1e-9;

/// Either kind of state accepted by [`partial_trace`].
#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a PureState),
    Mixed(&'a DensityMatrix),
}

impl<'a> From<&'a PureState> for StateRef<'a> {
    fn from(s: &'a PureState) -> Self {
        StateRef::Pure(s)
    }
}

impl<'a> From<&'a DensityMatrix> for StateRef<'a> {
    fn from(s: &'a DensityMatrix) -> Self {
        StateRef::Mixed(s)
    }
}

fn keep_positions<S: AsRef<str>>(layout: &SystemLayout, keep: &[S]) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(QuantumError::EmptyLabels);
    }
    let mut pos = layout.positions(keep)?;
    pos.sort_unstable();
    Ok(pos)
}

/// Amplitudes as a (kept × traced) matrix, kept labels in layout order.
fn schmidt_matrix(s: &PureState, pos: &[usize]) -> CMatrix {
    let layout = s.layout();
    let dk: usize = pos.iter().map(|&p| layout.dims()[p]).product();
    let dr = layout.dim() / dk;
    let mut m = CMatrix::zeros(dk, dr);
    for (i, (a, b)) in layout.split(pos).into_iter().enumerate() {
        m[(a, b)] = s.amplitudes()[i];
    }
    m
}

/// Reduced state on `keep`; the kept labels stay in layout order.
pub fn partial_trace<'a, S: AsRef<str>>(s: impl Into<StateRef<'a>>, keep: &[S]) -> Result<DensityMatrix> {
    let s = s.into();
    let layout = match s {
        StateRef::Pure(p) => p.layout(),
        StateRef::Mixed(d) => d.layout(),
    };
    let pos = keep_positions(layout, keep)?;
    let kept: Vec<&str> = pos.iter().map(|&p| layout.labels()[p].as_str()).collect();
    let sub = layout.sub(&kept)?;
    let rho = match s {
        StateRef::Pure(p) => {
            let m = schmidt_matrix(p, &pos);
            &m * m.adjoint()
        }
        StateRef::Mixed(d) => {
            let dk = sub.dim();
            let split = layout.split(&pos);
            let dr = layout.dim() / dk;
            let mut by_rest: Vec<Vec<(usize, usize)>> = vec![Vec::new(); dr];
            for (i, &(a, b)) in split.iter().enumerate() {
                by_rest[b].push((i, a));
            }
            let mut r = CMatrix::zeros(dk, dk);
            for group in &by_rest {
                for &(i, a) in group {
                    for &(j, b) in group {
                        r[(a, b)] += d.matrix()[(i, j)];
                    }
                }
            }
            r
        }
    };
    let rho = (&rho + rho.adjoint()) * c(0.5, 0.);
    Ok(DensityMatrix::from_parts_unchecked(sub, rho))
}

fn shannon_bits(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs
        .into_iter()
        .filter(|&p| p > 0.)
        .map(|p| -p * p.log2())
        .sum::<f64>()
        .max(0.)
}

/// `−Σ λ log₂ λ` over the spectrum, clamped to `[0, log₂ dim]`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let ev = eigenvalues_hermitian(rho.matrix());
    let s = shannon_bits(ev.into_iter().map(|l| l.max(0.)));
    s.min((rho.layout().dim() as f64).log2())
}

fn schmidt_coefficients(s: &PureState, pos: &[usize]) -> Vec<f64> {
    let m = schmidt_matrix(s, pos);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

fn bipartition_entropy(s: &PureState, pos: &[usize]) -> f64 {
    let sv = schmidt_coefficients(s, pos);
    let d = sv.len().max(1);
    shannon_bits(sv.iter().map(|x| x * x)).min((d as f64).log2())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglementEntropy {
    pub bits: f64,
    /// The side containing the first layout label, in layout order.
    pub b1: Vec<String>,
    pub b2: Vec<String>,
}

/// Maximum bipartition entropy over the `2^(n−1) − 1` nontrivial cuts.
/// Ties within 1e-9 go to the cut whose sorted `b1` labels come first.
pub fn entanglement_entropy(s: &PureState) -> Result<EntanglementEntropy> {
    let layout = s.layout();
    let n = layout.len();
    if n < 2 {
        return Err(QuantumError::SingleLabel);
    }
    let mut best: Option<(f64, Vec<String>, Vec<usize>)> = None;
    for mask in 0u64..(1u64 << (n - 1)) - 1 {
        let pos: Vec<usize> = std::iter::once(0)
            .chain((1..n).filter(|k| mask >> (k - 1) & 1 == 1))
            .collect();
        let v = bipartition_entropy(s, &pos);
        let mut key: Vec<String> = pos.iter().map(|&p| layout.labels()[p].clone()).collect();
        key.sort();
        let better = match &best {
            None => true,
            Some((b, k, _)) => v > b + TIE_TOL || ((v - b).abs() <= TIE_TOL && key < *k),
        };
        if better {
            best = Some((v, key, pos));
        }
    }
    let (bits, _, pos) = best.expect("n >= 2 gives at least one cut");
    let label = |p: &usize| layout.labels()[*p].clone();
    Ok(EntanglementEntropy {
        bits,
        b1: pos.iter().map(label).collect(),
        b2: (0..n).filter(|p| !pos.contains(p)).map(|p| label(&p)).collect(),
    })
}

/// Entropy of one given cut.
pub fn bipartition_entropy_bits<S: AsRef<str>>(s: &PureState, b1: &[S]) -> Result<f64> {
    let pos = check_cut(s.layout(), b1)?;
    Ok(bipartition_entropy(s, &pos))
}

fn check_cut<S: AsRef<str>>(layout: &SystemLayout, b1: &[S]) -> Result<Vec<usize>> {
    if b1.is_empty() {
        return Err(QuantumError::InvalidBipartition("first side is empty".into()));
    }
    let pos = layout.positions(b1).map_err(|e| QuantumError::InvalidBipartition(e.to_string()))?;
    if pos.len() == layout.len() {
        return Err(QuantumError::InvalidBipartition("second side is empty".into()));
    }
    let mut pos = pos;
    pos.sort_unstable();
    Ok(pos)
}

/// Schmidt rank 1 across `b1 | b2`. `b2` must be the complement of `b1`.
pub fn is_separable_pure<S: AsRef<str>, T: AsRef<str>>(s: &PureState, b1: &[S], b2: &[T]) -> Result<bool> {
    let layout = s.layout();
    let pos = check_cut(layout, b1)?;
    let other = check_cut(layout, b2)?;
    if pos.len() + other.len() != layout.len() || pos.iter().any(|p| other.contains(p)) {
        return Err(QuantumError::InvalidBipartition("sides must partition the layout".into()));
    }
    let sv = schmidt_coefficients(s, &pos);
    Ok(sv.get(1).is_none_or(|&x| x < SCHMIDT_TOL))
}
