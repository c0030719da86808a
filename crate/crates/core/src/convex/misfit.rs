use crate::error::{Error, Result};
use crate::matrix::norm2_sq;
use crate::scalar::Scalar;

/// Smooth strongly convex data misfit `g*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Misfit {
    /// `g*(y) = 1/2 ||y||^2`
    Quadratic,
    /// `g*(y) = r_eps(y) + tau/2 ||y||^2` with the Huber function `r_eps`.
    HuberQuad { eps: f64, tau: f64 },
}

impl Misfit {
    pub fn huber_quad(eps: f64, tau: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite() && tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Huber misfit needs eps > 0 and tau > 0, got eps={eps}, tau={tau}"
            )));
        }
        Ok(Self::HuberQuad { eps, tau })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Quadratic => "quadratic",
            Self::HuberQuad { .. } => "huber-quadratic",
        }
    }

    /// Lipschitz constant of `grad g*`.
    pub fn lipschitz(&self) -> f64 {
        match self {
            Self::Quadratic => 1.0,
            Self::HuberQuad { eps, tau } => 1.0 / eps + tau,
        }
    }

    pub fn is_quadratic(&self) -> bool {
        matches!(self, Self::Quadratic)
    }

    pub fn value<T: Scalar>(&self, y: &[T]) -> f64 {
        match self {
            Self::Quadratic => 0.5 * norm2_sq(y),
            Self::HuberQuad { eps, tau } => {
                let huber: f64 = y
                    .iter()
                    .map(|v| {
                        let m = v.modulus();
                        if m > *eps {
                            m - 0.5 * eps
                        } else {
                            m * m / (2.0 * eps)
                        }
                    })
                    .sum();
                huber + 0.5 * tau * norm2_sq(y)
            }
        }
    }

    pub fn gradient<T: Scalar>(&self, y: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); y.len()];
        self.gradient_into(y, &mut out);
        out
    }

    /// Componentwise `(1/max(eps, |y_j|) + tau) * y_j` for the Huber misfit.
    #[inline]
    pub fn gradient_into<T: Scalar>(&self, y: &[T], out: &mut [T]) {
        match self {
            Self::Quadratic => out.copy_from_slice(y),
            Self::HuberQuad { eps, tau } => {
                for (o, &v) in out.iter_mut().zip(y) {
                    *o = v.scale(1.0 / v.modulus().max(*eps) + tau);
                }
            }
        }
    }

    #[inline]
    pub fn gradient_scalar<T: Scalar>(&self, v: T) -> T {
        match self {
            Self::Quadratic => v,
            Self::HuberQuad { eps, tau } => v.scale(1.0 / v.modulus().max(*eps) + tau),
        }
    }
}
