//! Real embedding of complex systems:
//! `A -> [[Re A, -Im A], [Im A, Re A]]`, `x -> (Re x, Im x)`.

use crate::matrix::DenseMatrix;
use crate::scalar::Complex64;

pub fn embed_matrix(a: &DenseMatrix<Complex64>) -> DenseMatrix<f64> {
    let (m, n) = a.shape();
    DenseMatrix::from_fn(2 * m, 2 * n, |i, j| {
        let z = a.get(i % m, j % n);
        match (i < m, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

pub fn embed_vec(x: &[Complex64]) -> Vec<f64> {
    x.iter().map(|z| z.re).chain(x.iter().map(|z| z.im)).collect()
}

/// Left inverse of [`embed_vec`]. Panics on odd length.
pub fn extract_vec(x: &[f64]) -> Vec<Complex64> {
    assert!(x.len().is_multiple_of(2), "embedded vector must have even length");
    let n = x.len() / 2;
    (0..n).map(|j| Complex64::new(x[j], x[n + j])).collect()
}
