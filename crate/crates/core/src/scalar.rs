//! Field abstraction over `f64` and `Complex64`.
//!
//! Every container in the crate is generic over [`Scalar`], which is the
//! nalgebra `ComplexField` with real part `f64` plus a few helpers that the
//! solvers and generators need (field tag, Gaussian sampling, parsing).

use std::fmt::{Debug, Display};

use nalgebra::ComplexField;

use crate::linalg::SvdKernel;
pub use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Which field a scalar type lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

impl Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

pub trait Scalar: ComplexField<RealField = f64> + SvdKernel + Copy + Debug + Default + Send + Sync {
    const FIELD: Field;

    fn from_parts(re: f64, im: f64) -> Self;

    fn re(self) -> f64 {
        self.real()
    }

    fn im(self) -> f64 {
        self.imaginary()
    }

    fn abs2(self) -> f64 {
        self.modulus_squared()
    }

    fn conj(self) -> Self {
        self.conjugate()
    }

    /// Standard Gaussian in the field: `N(0,1)` on the reals, and
    /// `(g1 + i g2)/sqrt(2)` on the complex numbers, so `E|s|^2 = 1` in both.
    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Scalar for f64 {
    const FIELD: Field = Field::Real;

    fn from_parts(re: f64, _im: f64) -> Self {
        re
    }

    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

impl Scalar for Complex64 {
    const FIELD: Field = Field::Complex;

    fn from_parts(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }

    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}
