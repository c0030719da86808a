use crate::rng::RngStream;
use crate::scalar::Scalar;

/// Iterates of the GERK recursion.
///
/// `x = grad f*(x*)` and `z = grad g*(z*)` hold after every step. When the
/// `z*` recursion is disabled, `zstar` and `z` are empty.
#[derive(Debug, Clone)]
pub struct SolverState<T> {
    pub xstar: Vec<T>,
    pub x: Vec<T>,
    pub zstar: Vec<T>,
    pub z: Vec<T>,
    pub k: u64,
    pub rng: RngStream,
}

impl<T: Scalar> SolverState<T> {
    pub fn z_enabled(&self) -> bool {
        !self.zstar.is_empty()
    }
}
