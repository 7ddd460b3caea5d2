//! Thin helpers over nalgebra's dense complex routines.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Eigenvalue floor below which a Hermitian matrix is not PSD.
pub const PSD_FLOOR: f64 = -1e-10;
/// Eigenvalue cut used when counting projector ranks.
pub const RANK_THRESHOLD: f64 = 1e-8;

/// Ascending eigenvalues of a Hermitian matrix (the lower triangle is read).
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Ascending eigenvalues and matching orthonormal eigenvectors (columns).
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Number of eigenvalues above [`RANK_THRESHOLD`].
pub fn projector_rank(m: &CMatrix) -> usize {
    hermitian_eigenvalues(m)
        .into_iter()
        .filter(|&x| x > RANK_THRESHOLD)
        .count()
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}
