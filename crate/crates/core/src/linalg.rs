//! SVD-backed spectral quantities: norms, numerical rank, pseudoinverse and
//! orthonormal null-space bases.
//!
//! A singular value counts as zero when `sigma <= max(m, n) * sigma_max * 1e-12`.
//!
//! The decomposition itself comes from `faer`; nalgebra's complex SVD loses
//! accuracy on some tall rank-deficient inputs.

use nalgebra::{ColPivQR, DMatrix, QR};

use crate::error::{dim_mismatch, Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

/// Thin SVD kernel: `(U, sigma, V)` with `U` `m x k`, `V` `n x k`, `k = min(m, n)`.
pub trait SvdKernel: Sized {
    fn thin_svd(a: &DMatrix<Self>) -> (DMatrix<Self>, Vec<f64>, DMatrix<Self>);
}

fn faer_thin_svd<T>(a: &DMatrix<T>, re: fn(T) -> f64) -> Option<(DMatrix<T>, Vec<f64>, DMatrix<T>)>
where
    T: faer::traits::ComplexField<Real = f64> + nalgebra::Scalar + Copy,
{
    let (m, n) = a.shape();
    let mat = faer::Mat::<T>::from_fn(m, n, |i, j| a[(i, j)]);
    let svd = mat.thin_svd().ok()?;
    let k = m.min(n);
    let (u, s, v) = (svd.U(), svd.S(), svd.V());
    Some((
        DMatrix::from_fn(m, k, |i, j| u[(i, j)]),
        (0..k).map(|j| re(s[j])).collect(),
        DMatrix::from_fn(n, k, |i, j| v[(i, j)]),
    ))
}

macro_rules! svd_kernel {
    ($t:ty, $re:expr) => {
        impl SvdKernel for $t {
            fn thin_svd(a: &DMatrix<Self>) -> (DMatrix<Self>, Vec<f64>, DMatrix<Self>) {
                // a non-converging SVD is an unrecoverable numerical failure
                faer_thin_svd(a, $re).expect("SVD failed to converge")
            }
        }
    };
}

svd_kernel!(f64, |x| x);
svd_kernel!(crate::scalar::Complex64, |x: crate::scalar::Complex64| x.re);

/// Relative factor in the rank-decision threshold.
pub const RANK_RTOL: f64 = 1e-12;

/// Thin SVD of a dense matrix with singular values sorted in decreasing order.
#[derive(Debug, Clone)]
pub struct Svd<T: Scalar> {
    /// `m x k` left singular vectors, `k = min(m, n)`.
    pub u: DMatrix<T>,
    pub singular_values: Vec<f64>,
    /// `k x n`, rows are the conjugated right singular vectors.
    pub v_adjoint: DMatrix<T>,
    rows: usize,
    cols: usize,
}

impl<T: Scalar> Svd<T> {
    pub fn new(m: &DenseMatrix<T>) -> Self {
        Self::from_nalgebra(m.to_nalgebra())
    }

    fn from_nalgebra(mat: DMatrix<T>) -> Self {
        let (rows, cols) = mat.shape();
        if rows == 0 || cols == 0 {
            return Self {
                u: DMatrix::zeros(rows, 0),
                singular_values: Vec::new(),
                v_adjoint: DMatrix::zeros(0, cols),
                rows,
                cols,
            };
        }
        let (u_raw, sv, v_raw) = T::thin_svd(&mat);
        let mut order: Vec<usize> = (0..sv.len()).collect();
        order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]));
        let u = DMatrix::from_fn(rows, order.len(), |i, j| u_raw[(i, order[j])]);
        let v_adjoint = DMatrix::from_fn(order.len(), cols, |i, j| v_raw[(j, order[i])].conj());
        let singular_values = order.iter().map(|&k| sv[k]).collect();
        Self {
            u,
            singular_values,
            v_adjoint,
            rows,
            cols,
        }
    }

    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Threshold below which singular values are treated as zero.
    pub fn threshold(&self) -> f64 {
        self.rows.max(self.cols) as f64 * self.sigma_max() * RANK_RTOL
    }

    pub fn rank(&self) -> usize {
        let tol = self.threshold();
        self.singular_values.iter().filter(|&&s| s > tol).count()
    }

    /// Smallest singular value above the rank threshold.
    pub fn min_positive(&self) -> Option<f64> {
        let r = self.rank();
        if r == 0 {
            None
        } else {
            Some(self.singular_values[r - 1])
        }
    }

    /// `M^+ v`.
    pub fn pinv_apply(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.rows {
            return Err(dim_mismatch(self.rows, v.len()));
        }
        let r = self.rank();
        let mut out = vec![T::zero(); self.cols];
        for k in 0..r {
            // coefficient <u_k, v> / sigma_k
            let mut c = T::zero();
            for (i, &vi) in v.iter().enumerate() {
                c += self.u[(i, k)].conj() * vi;
            }
            let c = c.scale(1.0 / self.singular_values[k]);
            for (j, o) in out.iter_mut().enumerate() {
                // V = (V^H)^H, column k of V is the conjugated row k of V^H
                *o += self.v_adjoint[(k, j)].conj() * c;
            }
        }
        Ok(out)
    }

    /// Orthonormal basis of the range, `m x rank`.
    pub fn range_basis(&self) -> DenseMatrix<T> {
        let r = self.rank();
        DenseMatrix::from_fn(self.rows, r, |i, j| self.u[(i, j)])
    }
}

pub fn spectral_norm<T: Scalar>(m: &DenseMatrix<T>) -> f64 {
    match m.shape() {
        (0, _) | (_, 0) => 0.0,
        // a single row or column: the Euclidean norm is exact
        (1, _) | (_, 1) => m.frobenius_norm(),
        _ => Svd::new(m).sigma_max(),
    }
}

pub fn min_positive_singular<T: Scalar>(m: &DenseMatrix<T>) -> Result<f64> {
    Svd::new(m).min_positive().ok_or(Error::ZeroMatrix)
}

pub fn numerical_rank<T: Scalar>(m: &DenseMatrix<T>) -> usize {
    Svd::new(m).rank()
}

pub fn svd_pseudoinverse_apply<T: Scalar>(m: &DenseMatrix<T>, v: &[T]) -> Result<Vec<T>> {
    if v.len() != m.rows() {
        return Err(dim_mismatch(m.rows(), v.len()));
    }
    Svd::new(m).pinv_apply(v)
}

/// Orthonormal basis of the null space of `M^H`, i.e. the orthogonal
/// complement of the range of `M`. An empty (`m x 0`) result means `M`
/// has full row rank.
///
/// Built from the range basis rather than the trailing left singular vectors,
/// which the complex SVD does not resolve accurately for zero singular values.
pub fn nullspace_basis_adjoint<T: Scalar>(m: &DenseMatrix<T>) -> DenseMatrix<T> {
    let rows = m.rows();
    let svd = Svd::new(m);
    let r = svd.rank();
    if r >= rows {
        return DenseMatrix::zeros(rows, 0);
    }
    let u = svd.u.columns(0, r).into_owned();
    let project = |x: DMatrix<T>| -> DMatrix<T> {
        let c = u.adjoint() * &x;
        x - &u * c
    };
    // pivoted QR of the projector I - U U^H: the leading m - r columns of Q
    // span its range
    let p = project(DMatrix::identity(rows, rows));
    let q = ColPivQR::new(p).q().columns(0, rows - r).into_owned();
    // one re-orthogonalization pass against U
    let q = QR::new(project(q)).q();
    DenseMatrix::from_nalgebra(&q)
}
