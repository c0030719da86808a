use crate::scalar::{Complex64, Field, Scalar};

/// `max(|x| - lambda, 0) * x/|x|`, with `0/|0| := 0`. On the reals this is
/// evaluated as `max(|x| - lambda, 0) * sign(x)`.
#[inline]
pub fn shrink_scalar<T: Scalar>(x: T, lambda: f64) -> T {
    match T::FIELD {
        Field::Real => {
            let v = x.re();
            let m = v.abs() - lambda;
            if m > 0.0 {
                T::from_parts(m.copysign(v), 0.0)
            } else {
                T::zero()
            }
        }
        Field::Complex => {
            let m = x.modulus();
            if m > lambda {
                x.scale((m - lambda) / m)
            } else {
                T::zero()
            }
        }
    }
}

/// Componentwise soft shrinkage `S_lambda` on a real vector.
pub fn soft_shrinkage(x: &[f64], lambda: f64) -> Vec<f64> {
    x.iter().map(|&v| shrink_scalar(v, lambda)).collect()
}

/// Componentwise shrinkage of the modulus of a complex vector, phase preserved.
pub fn complex_shrinkage(x: &[Complex64], lambda: f64) -> Vec<Complex64> {
    x.iter().map(|&v| shrink_scalar(v, lambda)).collect()
}

/// Per group `g`: `x_g * max(0, 1 - lambda/||x_g||)`; a zero group stays zero.
pub fn group_shrinkage<T: Scalar>(x: &[T], lambda: f64, groups: &[Vec<usize>]) -> Vec<T> {
    let mut out = vec![T::zero(); x.len()];
    group_shrinkage_into(x, lambda, groups, &mut out);
    out
}

pub(crate) fn group_shrinkage_into<T: Scalar>(x: &[T], lambda: f64, groups: &[Vec<usize>], out: &mut [T]) {
    for g in groups {
        let norm = g.iter().map(|&i| x[i].abs2()).sum::<f64>().sqrt();
        let factor = if norm > lambda { 1.0 - lambda / norm } else { 0.0 };
        for &i in g {
            out[i] = x[i].scale(factor);
        }
    }
}
