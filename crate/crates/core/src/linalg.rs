//! Dense Hermitian helpers shared by the thermodynamic and dynamics code.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub fn is_real(m: &DMatrix<Complex64>) -> bool {
    m.iter().all(|v| v.im == 0.0)
}

/// Ascending eigenvalues of a Hermitian matrix. Real matrices take the cheaper
/// real symmetric route.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut vals: Vec<f64> = if is_real(m) {
        m.map(|v| v.re).symmetric_eigenvalues().iter().copied().collect()
    } else {
        m.clone().symmetric_eigenvalues().iter().copied().collect()
    };
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

/// Eigenvalues (ascending) and matching eigenvector columns.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let (vals, vecs) = if is_real(m) {
        let eig = m.map(|v| v.re).symmetric_eigen();
        (eig.eigenvalues.iter().copied().collect::<Vec<_>>(), eig.eigenvectors.map(|v| Complex64::new(v, 0.0)))
    } else {
        let eig = m.clone().symmetric_eigen();
        (eig.eigenvalues.iter().copied().collect::<Vec<_>>(), eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let sorted_vals = order.iter().map(|&i| vals[i]).collect();
    let sorted_vecs = DMatrix::from_fn(vecs.nrows(), vecs.ncols(), |r, c| vecs[(r, order[c])]);
    (sorted_vals, sorted_vecs)
}

/// Shannon entropy in nats of a probability vector; `0 log 0 = 0` and tiny
/// negative roundoff is clipped.
pub fn shannon(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs.into_iter().filter(|&p| p > 0.0).map(|p| -p * p.ln()).sum()
}

pub fn binary_entropy(p: f64) -> f64 {
    shannon([p, 1.0 - p])
}

pub fn outer(v: &DVector<Complex64>) -> DMatrix<Complex64> {
    v * v.adjoint()
}

pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}
