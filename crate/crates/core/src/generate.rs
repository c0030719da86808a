//! Random test matrices with prescribed rank and singular-value interval.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::rng::RngStream;
use crate::scalar::Scalar;

/// `m x k` matrix with orthonormal columns, from the QR factorization of a
/// field-appropriate Gaussian matrix.
pub fn random_orthonormal<T: Scalar>(m: usize, k: usize, rng: &mut RngStream) -> DMatrix<T> {
    // Column-major fill order keeps the draw sequence independent of storage.
    let mut g = DMatrix::<T>::zeros(m, k);
    for j in 0..k {
        for i in 0..m {
            g[(i, j)] = T::gaussian(rng);
        }
    }
    g.qr().q()
}

/// `A = U diag(s) V^H` with `r` singular values drawn uniformly from
/// `[sv_lo, sv_hi]` and random orthonormal `U` (m x r), `V` (n x r).
pub fn make_rank_deficient<T: Scalar>(
    m: usize,
    n: usize,
    r: usize,
    sv_lo: f64,
    sv_hi: f64,
    rng: &mut RngStream,
) -> Result<DenseMatrix<T>> {
    if r == 0 || r >= m.min(n) {
        return Err(Error::InvalidRank {
            rank: r,
            rows: m,
            cols: n,
        });
    }
    if !(sv_lo > 0.0 && sv_lo < sv_hi && sv_hi.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "singular value interval [{sv_lo}, {sv_hi}] must satisfy 0 < lo < hi"
        )));
    }
    let u = random_orthonormal::<T>(m, r, rng);
    let v = random_orthonormal::<T>(n, r, rng);
    let sigma: Vec<f64> = (0..r).map(|_| rng.random_range(sv_lo..=sv_hi)).collect();

    let mut us = u;
    for (k, &s) in sigma.iter().enumerate() {
        us.column_mut(k).iter_mut().for_each(|x| *x = x.scale(s));
    }
    let a = us * v.adjoint();
    Ok(DenseMatrix::from_nalgebra(&a))
}
