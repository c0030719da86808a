use rand::seq::index;

use crate::error::{Error, Result};
use crate::generate::make_rank_deficient;
use crate::linalg::nullspace_basis_adjoint;
use crate::matrix::{norm2, norm_inf, DenseMatrix};
use crate::rng::RngStream;
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    /// Noise in the null space of `A^H`.
    RangeComplement,
    /// A few entries of `b` shifted by `noise_level ||b_hat||_inf`.
    Impulsive,
}

/// Dimensions and spectrum for the synthetic instances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub m: usize,
    pub n: usize,
    pub rank: usize,
    pub sparsity: usize,
    pub noise_level: f64,
    pub sv_lo: f64,
    pub sv_hi: f64,
}

#[derive(Debug, Clone)]
pub struct ProblemInstance<T> {
    pub a: DenseMatrix<T>,
    pub b: Vec<T>,
    pub b_hat: Vec<T>,
    pub x_hat: Vec<T>,
    pub noise_kind: NoiseKind,
    pub noise_level: f64,
    pub field: Field,
}

impl<T: Scalar> ProblemInstance<T> {
    pub fn noise(&self) -> Vec<T> {
        crate::matrix::sub(&self.b, &self.b_hat)
    }
}

impl GenParams {
    fn check(&self) -> Result<()> {
        if self.rank >= self.m {
            return Err(Error::DegenerateNullspace);
        }
        if self.sparsity > self.n {
            return Err(Error::InvalidParameter(format!(
                "sparsity {} exceeds n = {}",
                self.sparsity, self.n
            )));
        }
        if !(self.noise_level >= 0.0 && self.noise_level.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "noise level must be >= 0, got {}",
                self.noise_level
            )));
        }
        Ok(())
    }

    /// Number of corrupted entries in the impulsive model, `ceil(n / 20)`.
    pub fn impulsive_count(&self) -> usize {
        self.n.div_ceil(20)
    }
}

/// Rank-deficient `A`, planted `s`-sparse Gaussian `x_hat`, `b_hat = A x_hat`.
fn planted<T: Scalar>(p: &GenParams, rng: &mut RngStream) -> Result<(DenseMatrix<T>, Vec<T>, Vec<T>)> {
    p.check()?;
    let a = make_rank_deficient::<T>(p.m, p.n, p.rank, p.sv_lo, p.sv_hi, rng)?;
    let mut x_hat = vec![T::zero(); p.n];
    for j in index::sample(rng, p.n, p.sparsity) {
        x_hat[j] = T::gaussian(rng);
    }
    let b_hat = a.mul_vec(&x_hat)?;
    Ok((a, x_hat, b_hat))
}

/// Least-squares family: `b = b_hat + N v` with the columns of `N` spanning
/// the null space of `A^H` and `v` uniform on the sphere of radius
/// `noise_level ||b_hat||`.
pub fn gen_experiment_i<T: Scalar>(p: &GenParams, rng: &mut RngStream) -> Result<ProblemInstance<T>> {
    let (a, x_hat, b_hat) = planted::<T>(p, rng)?;
    let mut b = b_hat.clone();
    let basis = nullspace_basis_adjoint(&a);
    if basis.cols() == 0 {
        return Err(Error::DegenerateNullspace);
    }
    let v: Vec<T> = (0..basis.cols()).map(|_| T::gaussian(rng)).collect();
    if p.noise_level > 0.0 {
        let rho = p.noise_level * norm2(&b_hat);
        let scale = rho / norm2(&v);
        let v: Vec<T> = v.iter().map(|c| c.scale(scale)).collect();
        let eta = basis.mul_vec(&v)?;
        b.iter_mut().zip(&eta).for_each(|(bi, &e)| *bi += e);
    }
    Ok(ProblemInstance {
        a,
        b,
        b_hat,
        x_hat,
        noise_kind: NoiseKind::RangeComplement,
        noise_level: p.noise_level,
        field: T::FIELD,
    })
}

/// Impulsive family: `ceil(n/20)` entries of `b_hat`, drawn without
/// replacement from all `m` rows, are shifted by `+-noise_level ||b_hat||_inf`
/// (complex: `(+-1 +- i)/sqrt(2)` times that).
pub fn gen_experiment_ii<T: Scalar>(p: &GenParams, rng: &mut RngStream) -> Result<ProblemInstance<T>> {
    let count = p.impulsive_count();
    if count > p.m {
        return Err(Error::InvalidParameter(format!(
            "{count} corrupted entries do not fit in {} rows",
            p.m
        )));
    }
    let (a, x_hat, b_hat) = planted::<T>(p, rng)?;
    let mut b = b_hat.clone();
    let height = p.noise_level * norm_inf(&b_hat);
    for i in index::sample(rng, p.m, count) {
        let mut sign = || if rng.uniform() < 0.5 { -1.0 } else { 1.0 };
        let e = match T::FIELD {
            Field::Real => T::from_parts(sign() * height, 0.0),
            Field::Complex => {
                let h = height / std::f64::consts::SQRT_2;
                T::from_parts(sign() * h, sign() * h)
            }
        };
        b[i] += e;
    }
    Ok(ProblemInstance {
        a,
        b,
        b_hat,
        x_hat,
        noise_kind: NoiseKind::Impulsive,
        noise_level: p.noise_level,
        field: T::FIELD,
    })
}
