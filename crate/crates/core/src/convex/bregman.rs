use crate::error::{dim_mismatch, Error, Result};
use crate::matrix::{dist2, norm2, real_inner};
use crate::scalar::Scalar;

use super::Regularizer;

/// Admissibility tolerance for `||x - grad f*(x*)||`, scaled by `1 + ||x||`.
pub const SUBGRADIENT_TOL: f64 = 1e-8;

/// `D_f^{x*}(x, y) = f*(x*) - Re<x*, y> + f(y)` for `x* in df(x)`.
///
/// Admissibility is checked through `x = grad f*(x*)`.
pub fn bregman_distance<T: Scalar>(f: &Regularizer, x: &[T], xstar: &[T], y: &[T]) -> Result<f64> {
    if x.len() != xstar.len() || x.len() != y.len() {
        return Err(dim_mismatch(x.len(), format!("{} and {}", xstar.len(), y.len())));
    }
    let image = f.conj_gradient(xstar)?;
    let deviation = dist2(x, &image);
    if deviation > SUBGRADIENT_TOL * (1.0 + norm2(x)) {
        return Err(Error::NotASubgradient { deviation });
    }
    Ok(f.conj_value(xstar)? - real_inner(xstar, y) + f.value(y)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::soft_shrinkage;
    use crate::matrix::norm2_sq;
    use crate::rng::RngStream;
    use crate::scalar::Complex64;
    use rand::Rng;

    fn random_vec(rng: &mut RngStream, n: usize, scale: f64) -> Vec<f64> {
        (0..n).map(|_| rng.random_range(-1.0..1.0) * scale).collect()
    }

    #[test]
    fn quadratic_is_half_squared_distance() {
        let mut rng = RngStream::new(4);
        for _ in 0..50 {
            let x = random_vec(&mut rng, 5, 3.0);
            let y = random_vec(&mut rng, 5, 3.0);
            let d = bregman_distance(&Regularizer::Quadratic, &x, &x, &y).unwrap();
            let expected = 0.5 * dist2(&x, &y).powi(2);
            assert!((d - expected).abs() <= 1e-12 * (1.0 + expected));
        }
    }

    #[test]
    fn distance_to_itself_is_zero() {
        let f = Regularizer::elastic_net(0.7).unwrap();
        let xstar = vec![2.0, -0.3, 0.9, -1.5];
        let x = soft_shrinkage(&xstar, 0.7);
        assert!(bregman_distance(&f, &x, &xstar, &x).unwrap().abs() < 1e-14);
    }

    #[test]
    fn rejects_non_subgradient() {
        let f = Regularizer::elastic_net(1.0).unwrap();
        let e = bregman_distance(&f, &[1.0], &[1.0], &[0.0]).unwrap_err();
        assert!(matches!(e, Error::NotASubgradient { .. }));
    }

    /// Elastic net closed form `1/2||x-y||^2 + lambda(||y||_1 - <s,y>)`
    /// with `s = (x* - x)/lambda`, against the Fenchel form.
    #[test]
    fn elastic_net_closed_form_agrees() {
        let mut rng = RngStream::new(5);
        for _ in 0..200 {
            let lambda = rng.random_range(0.1..3.0);
            let f = Regularizer::elastic_net(lambda).unwrap();
            let xstar = random_vec(&mut rng, 6, 5.0);
            let x = soft_shrinkage(&xstar, lambda);
            let y = random_vec(&mut rng, 6, 5.0);
            let s: Vec<f64> = xstar.iter().zip(&x).map(|(a, b)| (a - b) / lambda).collect();
            let closed =
                0.5 * dist2(&x, &y).powi(2) + lambda * (y.iter().map(|v| v.abs()).sum::<f64>() - real_inner(&s, &y));
            let fenchel = bregman_distance(&f, &x, &xstar, &y).unwrap();
            assert!((closed - fenchel).abs() <= 1e-10 * (1.0 + closed.abs()));
            // lower bound alpha/2 ||x - y||^2
            assert!(fenchel >= 0.5 * dist2(&x, &y).powi(2) - 1e-10);
        }
    }

    #[test]
    fn complex_lower_bound() {
        let mut rng = RngStream::new(6);
        let f = Regularizer::complex_elastic_net(1.2).unwrap();
        for _ in 0..200 {
            let xstar: Vec<Complex64> = (0..5).map(|_| Complex64::gaussian(&mut rng) * 3.0).collect();
            let x = f.conj_gradient(&xstar).unwrap();
            let y: Vec<Complex64> = (0..5).map(|_| Complex64::gaussian(&mut rng) * 3.0).collect();
            let d = bregman_distance(&f, &x, &xstar, &y).unwrap();
            let diff: Vec<Complex64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
            assert!(d >= 0.5 * norm2_sq(&diff) - 1e-10);
        }
    }
}
