//! Explicit error-bound constants for the elastic-net regularizer and an
//! empirical check of the bound `D_f^{x*}(x, xhat) <= gamma ||Ax - y||^2`.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::convex::{bregman_distance, Regularizer};
use crate::error::{Error, Result};
use crate::linalg::{min_positive_singular, Svd};
use crate::matrix::{norm2, norm2_sq, sub, DenseMatrix};
use crate::rng::RngStream;
use crate::scalar::Scalar;

/// Default cap on the number of columns for subset enumeration.
pub const MAX_ENUM_COLS: usize = 15;

/// Entries of `xhat` at or below this modulus count as zero.
pub const XHAT_ZERO_TOL: f64 = 1e-12;

/// Probe magnitudes for the dual samples `x* = A^T u`.
pub const SAMPLE_SCALES: [f64; 3] = [0.1, 1.0, 10.0];

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorBoundCertificate {
    pub sigma_tilde_min: f64,
    pub sigma_min_plus: f64,
    /// 0 when `xhat = 0`.
    pub xhat_min_abs: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub n_enumerated_subsets: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub samples: usize,
    pub violations: usize,
    /// Largest observed `D / ||Ax - y||^2` (samples with zero residual skipped).
    pub max_ratio: f64,
}

fn subset_sigma<T: Scalar>(a: &DenseMatrix<T>, mask: u32) -> Option<f64> {
    let cols: Vec<usize> = (0..a.cols()).filter(|j| mask >> j & 1 == 1).collect();
    let sub = a.select_columns(&cols);
    if sub.max_abs() == 0.0 {
        return None;
    }
    Svd::new(&sub).min_positive()
}

/// `min { sigma_min^+(A_J) : A_J != 0 }` over all nonempty column subsets `J`,
/// together with the number of subsets visited.
pub fn sigma_tilde_min_counted<T: Scalar>(a: &DenseMatrix<T>, max_cols: usize) -> Result<(f64, u64)> {
    let n = a.cols();
    let cap = max_cols.min(31);
    if n > cap {
        return Err(Error::TooManyColumns { cols: n, max: cap });
    }
    if a.is_empty() || a.max_abs() == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let count = (1u64 << n) - 1;
    #[cfg(feature = "parallel")]
    let best = (1..=count as u32)
        .into_par_iter()
        .filter_map(|mask| subset_sigma(a, mask))
        .min_by(f64::total_cmp);
    #[cfg(not(feature = "parallel"))]
    let best = (1..=count as u32)
        .filter_map(|mask| subset_sigma(a, mask))
        .min_by(f64::total_cmp);
    best.map(|s| (s, count)).ok_or(Error::ZeroMatrix)
}

pub fn sigma_tilde_min<T: Scalar>(a: &DenseMatrix<T>, max_cols: usize) -> Result<f64> {
    sigma_tilde_min_counted(a, max_cols).map(|(s, _)| s)
}

/// `gamma(xhat) = (|xhat|_min + 2 lambda) / (|xhat|_min sigma~^2)`, or
/// `2n / sigma_min^+(A)^2` for `xhat = 0`.
pub fn gamma_hat<T: Scalar>(a: &DenseMatrix<T>, xhat: &[T], lambda: f64) -> Result<ErrorBoundCertificate> {
    if xhat.len() != a.cols() {
        return Err(crate::error::dim_mismatch(a.cols(), xhat.len()));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda must be >= 0, got {lambda}")));
    }
    let (sigma_tilde_min, n_enumerated_subsets) = sigma_tilde_min_counted(a, MAX_ENUM_COLS)?;
    let sigma_min_plus = min_positive_singular(a)?;
    let xhat_min_abs = xhat
        .iter()
        .map(|v| v.modulus())
        .filter(|&v| v > XHAT_ZERO_TOL)
        .min_by(f64::total_cmp)
        .unwrap_or(0.0);
    let gamma = if xhat_min_abs == 0.0 {
        2.0 * a.cols() as f64 / (sigma_min_plus * sigma_min_plus)
    } else {
        (xhat_min_abs + 2.0 * lambda) / (xhat_min_abs * sigma_tilde_min * sigma_tilde_min)
    };
    Ok(ErrorBoundCertificate {
        sigma_tilde_min,
        sigma_min_plus,
        xhat_min_abs,
        lambda,
        gamma,
        n_enumerated_subsets,
    })
}

/// Samples admissible pairs `x* = A^T u`, `x = grad f*(x*)` with `u` standard
/// Gaussian scaled by 0.1, 1 and 10 in turn, and counts violations of
/// `D <= gamma ||Ax - y||^2 + 1e-10 (1 + D)`.
pub fn verify_error_bound(
    a: &DenseMatrix<f64>,
    yhat: &[f64],
    f: &Regularizer,
    xhat: &[f64],
    gamma: f64,
    n_samples: usize,
    rng: &mut RngStream,
) -> Result<VerificationReport> {
    let (m, n) = a.shape();
    if yhat.len() != m {
        return Err(crate::error::dim_mismatch(m, yhat.len()));
    }
    if xhat.len() != n {
        return Err(crate::error::dim_mismatch(n, xhat.len()));
    }
    f.check_compatible::<f64>(n)?;
    let fit = norm2(&sub(&a.mul_vec(xhat)?, yhat));
    if fit > 1e-8 * norm2(yhat) {
        return Err(Error::OracleMismatch {
            residual: fit / norm2(yhat).max(f64::MIN_POSITIVE),
        });
    }
    let mut report = VerificationReport {
        samples: n_samples,
        violations: 0,
        max_ratio: 0.0,
    };
    for s in 0..n_samples {
        let scale = SAMPLE_SCALES[s % SAMPLE_SCALES.len()];
        let u: Vec<f64> = (0..m).map(|_| scale * f64::gaussian(rng)).collect();
        let xstar = a.adjoint_mul_vec(&u)?;
        let x = f.conj_gradient(&xstar)?;
        let d = bregman_distance(f, &x, &xstar, xhat)?;
        let res = norm2_sq(&sub(&a.mul_vec(&x)?, yhat));
        if d > gamma * res + 1e-10 * (1.0 + d) {
            report.violations += 1;
        }
        if res > 0.0 {
            report.max_ratio = report.max_ratio.max(d / res);
        }
    }
    Ok(report)
}
