//! Randomized Kaczmarz-type solvers for structured solutions of linear
//! systems over the reals and the complex numbers.
//!
//! The general iteration pairs a strongly convex regularizer `f` (selected
//! through its conjugate gradient, a shrinkage) with a smooth misfit `g*`
//! whose gradient drives an auxiliary column recursion. Plain randomized
//! Kaczmarz (RK), sparse Kaczmarz (SRK) and randomized extended Kaczmarz (REK)
//! are special configurations, see [`solver::preset`].

pub mod certificate;
pub mod convex;
pub mod embed;
pub mod error;
pub mod generate;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod oracle;
pub mod partition;
pub mod rng;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
pub use matrix::DenseMatrix;
pub use scalar::{Complex64, Field, Scalar};
