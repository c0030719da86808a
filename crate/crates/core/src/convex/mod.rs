//! Strongly convex regularizers `f` (used through `grad f*`), smooth strongly
//! convex misfits `g*` (used through `grad g*`), and Bregman distances.

mod bregman;
mod misfit;
mod regularizer;
mod shrinkage;

pub use bregman::{bregman_distance, SUBGRADIENT_TOL};
pub use misfit::Misfit;
pub use regularizer::{Groups, Regularizer};
pub use shrinkage::{complex_shrinkage, group_shrinkage, shrink_scalar, soft_shrinkage};
