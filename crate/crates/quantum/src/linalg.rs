//! Dense complex matrix helpers over nalgebra.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{QuantumError, Result};
use crate::layout::SystemLayout;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

pub fn hadamard() -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_row_slice(2, 2, &[c(h, 0.), c(h, 0.), c(h, 0.), c(-h, 0.)])
}

/// `cos φ · Z + sin φ · X`: a dichotomic observable along an axis in the x-z plane.
pub fn axis(phi: f64) -> CMatrix {
    pauli_z() * c(phi.cos(), 0.) + pauli_x() * c(phi.sin(), 0.)
}

/// Rotation about the y axis by `theta`: `exp(-i θ Y / 2)`.
pub fn rotation_y(theta: f64) -> CMatrix {
    let (s, co) = (theta / 2.).sin_cos();
    CMatrix::from_row_slice(2, 2, &[c(co, 0.), c(-s, 0.), c(s, 0.), c(co, 0.)])
}

/// Controlled-X with the first factor as control.
pub fn cnot() -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    for (i, j) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        m[(i, j)] = c(1., 0.);
    }
    m
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0., f64::max)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn ensure_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(QuantumError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Entry `(row, col)` where `|m - m†|` is largest, with that deviation.
pub fn hermiticity_witness(m: &CMatrix) -> (usize, usize, f64) {
    let d = m - m.adjoint();
    let mut best = (0, 0, 0.);
    for i in 0..d.nrows() {
        for j in 0..d.ncols() {
            if d[(i, j)].norm() > best.2 {
                best = (i, j, d[(i, j)].norm());
            }
        }
    }
    best
}

pub fn unitarity_defect(m: &CMatrix) -> f64 {
    max_abs(&(m.adjoint() * m - identity(m.nrows())))
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn eigenvalues_hermitian(m: &CMatrix) -> Vec<f64> {
    let h = (m + m.adjoint()) * c(0.5, 0.);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// `exp(-i t H)` for Hermitian `H`, through its eigendecomposition.
pub fn exp_i_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    let sym = (h + h.adjoint()) * c(0.5, 0.);
    let eig = sym.symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases = CMatrix::from_diagonal(&CVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&l| C64::from_polar(1., -t * l)),
    ));
    v * phases * v.adjoint()
}

/// Lifts an operator on `sector` (factor order as listed) to `layout`,
/// acting as the identity on every other label.
pub fn embed<S: AsRef<str>>(op: &CMatrix, sector: &[S], layout: &SystemLayout) -> Result<CMatrix> {
    let pos = layout.positions(sector)?;
    let ds: usize = pos.iter().map(|&p| layout.dims()[p]).product();
    let n = ensure_square(op)?;
    if n != ds {
        return Err(QuantumError::DimensionMismatch { expected: ds, actual: n });
    }
    let dim = layout.dim();
    let split = layout.split(&pos);
    // index of every (sector, rest) pair
    let mut back = vec![0usize; dim];
    let dr = dim / ds;
    for (i, &(a, b)) in split.iter().enumerate() {
        back[a * dr + b] = i;
    }
    let mut out = CMatrix::zeros(dim, dim);
    for (i, &(a, b)) in split.iter().enumerate() {
        for t in 0..ds {
            let v = op[(a, t)];
            if v != C64::new(0., 0.) {
                out[(i, back[t * dr + b])] = v;
            }
        }
    }
    Ok(out)
}

/// Reads a matrix from rows of `[re, im]` pairs.
pub fn matrix_from_pairs(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    let n = rows.len();
    for r in rows {
        if r.len() != n {
            return Err(QuantumError::NotSquare { rows: n, cols: r.len() });
        }
    }
    Ok(CMatrix::from_fn(n, n, |i, j| c(rows[i][j][0], rows[i][j][1])))
}

pub fn matrix_to_pairs(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embed_matches_kron() {
        let l = SystemLayout::qubits(["a", "b", "c"]).unwrap();
        let on_b = embed(&pauli_x(), &["b"], &l).unwrap();
        let expected = kron(&kron(&identity(2), &pauli_x()), &identity(2));
        assert!(max_abs(&(on_b - expected)) < 1e-15);
        // reversed sector order swaps the factors
        let zx = kron(&pauli_z(), &pauli_x());
        let on_cb = embed(&zx, &["c", "a"], &l).unwrap();
        let expected = kron(&kron(&pauli_x(), &identity(2)), &pauli_z());
        assert!(max_abs(&(on_cb - expected)) < 1e-15);
    }

    #[test]
    fn axis_and_rotation_agree() {
        // R(θ) Z R(θ)† is the axis at angle θ
        let th = 0.7;
        let r = rotation_y(th);
        let conj = &r * pauli_z() * r.adjoint();
        assert!(max_abs(&(conj - axis(th))) < 1e-14);
    }

    #[test]
    fn exponential_is_unitary() {
        let h = pauli_x() + pauli_z() * c(0.3, 0.);
        let u = exp_i_hermitian(&h, 1.3);
        assert!(unitarity_defect(&u) < 1e-13);
        // exp(-i π/2 X) = -i X
        let u = exp_i_hermitian(&pauli_x(), std::f64::consts::FRAC_PI_2);
        assert!(max_abs(&(u - pauli_x() * c(0., -1.))) < 1e-14);
    }
}
