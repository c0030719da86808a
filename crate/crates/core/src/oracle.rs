//! Slow, deterministic full-matrix solvers producing ground truth for tests:
//! the range projection `yhat`, the misfit projection under a smooth `g*`, and
//! the constrained regularizer minimizer `xhat`.
//!
//! The iterative oracles run the plain gradient map of their model problem
//! with Nesterov momentum and gradient-based restart; without acceleration the
//! Huber misfit (condition number around `1/(eps tau)`) needs millions of steps.

use thiserror::Error;

use crate::convex::{Misfit, Regularizer};
use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{spectral_norm, Svd};
use crate::matrix::{norm2, real_inner, sub, DenseMatrix};
use crate::scalar::Scalar;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: u64 = 1_000_000;

/// Stopping tests run every this many iterations.
const CHECK_EVERY: u64 = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution<T> {
    pub value: Vec<T>,
    /// The quantity tested against `tol` (relative).
    pub residual_norm: f64,
    pub iterations: u64,
    pub converged: bool,
}

#[derive(Debug, Error)]
pub enum OracleError<T: std::fmt::Debug> {
    #[error("oracle did not converge in {} iterations (residual {:.3e})", .0.iterations, .0.residual_norm)]
    NotConverged(OracleSolution<T>),
    #[error(transparent)]
    Core(#[from] Error),
}

impl<T: std::fmt::Debug> OracleError<T> {
    /// Best iterate, if any.
    pub fn best(&self) -> Option<&OracleSolution<T>> {
        match self {
            OracleError::NotConverged(s) => Some(s),
            OracleError::Core(_) => None,
        }
    }
}

pub type OracleResult<T> = std::result::Result<OracleSolution<T>, OracleError<T>>;

/// `yhat = A A^+ b`, the Euclidean projection of `b` onto `R(A)`.
pub fn range_projection_quadratic<T: Scalar>(a: &DenseMatrix<T>, b: &[T]) -> Result<Vec<T>> {
    if b.len() != a.rows() {
        return Err(dim_mismatch(a.rows(), b.len()));
    }
    let x = Svd::new(a).pinv_apply(b)?;
    a.mul_vec(&x)
}

/// Accelerated gradient loop with restart on `c`, shared by the iterative
/// oracles. `grad` writes the gradient at its first argument into the second;
/// `done` inspects the current iterate and returns the stopping quantity.
fn accelerated<T: Scalar>(
    init: Vec<T>,
    step: f64,
    tol: f64,
    max_iter: u64,
    mut grad: impl FnMut(&[T], &mut [T]),
    mut done: impl FnMut(&[T], Option<&[T]>) -> f64,
) -> (Vec<T>, f64, u64, bool) {
    let mut c = init;
    let mut y = c.clone();
    let mut prev = c.clone();
    let mut g = vec![T::zero(); c.len()];
    let mut theta = 1.0_f64;
    let mut k = 0;
    let mut measure = done(&c, None);
    if measure <= tol {
        return (c, measure, 0, true);
    }
    while k < max_iter {
        grad(&y, &mut g);
        let next: Vec<T> = y.iter().zip(&g).map(|(&yi, &gi)| yi - gi.scale(step)).collect();
        let diff = sub(&next, &c);
        if real_inner(&g, &diff) > 0.0 {
            theta = 1.0;
        }
        let theta_next = 0.5 * (1.0 + (1.0 + 4.0 * theta * theta).sqrt());
        let beta = (theta - 1.0) / theta_next;
        y = next.iter().zip(&diff).map(|(&n, &d)| n + d.scale(beta)).collect();
        std::mem::swap(&mut prev, &mut c);
        c = next;
        theta = theta_next;
        k += 1;
        if k % CHECK_EVERY == 0 || k == max_iter {
            measure = done(&c, Some(&prev));
            if measure <= tol {
                return (c, measure, k, true);
            }
        }
    }
    (c, measure, k, false)
}

/// `yhat = argmin g*(b - y)` over `y in R(A)`, with `yhat = U c` for an
/// orthonormal basis `U` of the range. Stops once
/// `||A^H grad g*(b - yhat)|| <= tol ||b||`.
pub fn misfit_projection<T: Scalar>(
    a: &DenseMatrix<T>,
    b: &[T],
    g: &Misfit,
    tol: f64,
    max_iter: u64,
) -> OracleResult<T> {
    if b.len() != a.rows() {
        return Err(dim_mismatch(a.rows(), b.len()).into());
    }
    let basis = Svd::new(a).range_basis();
    let r = basis.cols();
    let bnorm = norm2(b);
    if bnorm == 0.0 || r == 0 {
        let value = vec![T::zero(); b.len()];
        let residual_norm = if bnorm == 0.0 {
            0.0
        } else {
            norm2(&a.adjoint_mul_vec(&g.gradient(b))?) / bnorm
        };
        return Ok(OracleSolution {
            value,
            residual_norm,
            iterations: 0,
            converged: true,
        });
    }
    let mut resid = vec![T::zero(); b.len()];
    let mut dg = vec![T::zero(); b.len()];
    let (c, measure, iterations, converged) = accelerated(
        vec![T::zero(); r],
        1.0 / g.lipschitz(),
        tol,
        max_iter,
        |c, out| {
            // d/dc g*(b - U c) = -U^H grad g*(b - U c)
            let y = basis.mul_vec(c).expect("basis shape");
            resid
                .iter_mut()
                .zip(b.iter().zip(&y))
                .for_each(|(r, (&bi, &yi))| *r = bi - yi);
            g.gradient_into(&resid, &mut dg);
            let u = basis.adjoint_mul_vec(&dg).expect("basis shape");
            out.iter_mut().zip(&u).for_each(|(o, &ui)| *o = -ui);
        },
        |c, _| {
            let y = basis.mul_vec(c).expect("basis shape");
            let grad = g.gradient(&sub(b, &y));
            norm2(&a.adjoint_mul_vec(&grad).expect("shape")) / bnorm
        },
    );
    let sol = OracleSolution {
        value: basis.mul_vec(&c)?,
        residual_norm: measure,
        iterations,
        converged,
    };
    if converged {
        Ok(sol)
    } else {
        Err(OracleError::NotConverged(sol))
    }
}

/// `xhat = argmin f(x)` subject to `A x = yhat`, via the dual iteration
/// `x* = A^H u`, `x = grad f*(x*)`, `u <- u - t (A x - yhat)`,
/// `t = 1/(L_{f*} ||A||^2)`. Use [`constrained_regularizer_min_with_dual`] to
/// also get `x*`.
pub fn constrained_regularizer_min<T: Scalar>(
    a: &DenseMatrix<T>,
    yhat: &[T],
    f: &Regularizer,
    tol: f64,
    max_iter: u64,
) -> OracleResult<T> {
    constrained_regularizer_min_with_dual(a, yhat, f, tol, max_iter).map(|d| d.solution)
}

/// Minimizer together with its dual certificate `x* in R(A^H)`,
/// `x = grad f*(x*)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCertificate<T> {
    pub solution: OracleSolution<T>,
    pub xstar: Vec<T>,
}

pub fn constrained_regularizer_min_with_dual<T: Scalar>(
    a: &DenseMatrix<T>,
    yhat: &[T],
    f: &Regularizer,
    tol: f64,
    max_iter: u64,
) -> std::result::Result<DualCertificate<T>, OracleError<T>> {
    let (m, n) = a.shape();
    if yhat.len() != m {
        return Err(dim_mismatch(m, yhat.len()).into());
    }
    f.check_compatible::<T>(n)?;
    let norm_a = spectral_norm(a);
    if norm_a == 0.0 {
        return Err(Error::ZeroMatrix.into());
    }
    let ynorm = norm2(yhat);
    let step = 1.0 / (f.conj_lipschitz() * norm_a * norm_a);
    let primal = |u: &[T]| -> (Vec<T>, Vec<T>) {
        let xstar = a.adjoint_mul_vec(u).expect("shape");
        let mut x = vec![T::zero(); n];
        f.conj_gradient_into(&xstar, &mut x);
        (xstar, x)
    };
    let (u, measure, iterations, converged) = accelerated(
        vec![T::zero(); m],
        step,
        tol,
        max_iter,
        |u, out| {
            let (_, x) = primal(u);
            let ax = a.mul_vec(&x).expect("shape");
            out.iter_mut()
                .zip(ax.iter().zip(yhat))
                .for_each(|(o, (&p, &q))| *o = p - q);
        },
        |u, prev| {
            let (_, x) = primal(u);
            let res = norm2(&sub(&a.mul_vec(&x).expect("shape"), yhat)) / ynorm.max(f64::MIN_POSITIVE);
            let res = if ynorm == 0.0 { norm2(&x) } else { res };
            let change = match prev {
                Some(p) => {
                    let (_, xp) = primal(p);
                    norm2(&sub(&x, &xp)) / norm2(&x).max(1.0)
                }
                None => f64::INFINITY,
            };
            if change <= tol {
                res
            } else {
                res.max(change)
            }
        },
    );
    let (xstar, x) = primal(&u);
    let sol = OracleSolution {
        value: x,
        residual_norm: measure,
        iterations,
        converged,
    };
    if converged {
        Ok(DualCertificate { solution: sol, xstar })
    } else {
        Err(OracleError::NotConverged(sol))
    }
}
