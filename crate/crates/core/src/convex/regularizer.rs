use crate::error::{dim_mismatch, Error, Result};
use crate::matrix::{norm2_sq, real_inner};
use crate::scalar::{Field, Scalar};

use super::shrinkage::{group_shrinkage_into, shrink_scalar};

/// A partition of the coordinates `0..n` into groups.
#[derive(Debug, Clone, PartialEq)]
pub struct Groups {
    groups: Vec<Vec<usize>>,
    dim: usize,
}

impl Groups {
    pub fn new(groups: Vec<Vec<usize>>) -> Result<Self> {
        let dim: usize = groups.iter().map(Vec::len).sum();
        let mut seen = vec![false; dim];
        for g in &groups {
            if g.is_empty() {
                return Err(Error::InvalidPartition("empty group".into()));
            }
            for &i in g {
                if i >= dim || std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidPartition(format!(
                        "groups do not partition 0..{dim} (index {i})"
                    )));
                }
            }
        }
        Ok(Self { groups, dim })
    }

    /// Groups `{j, half + j}` pairing real and imaginary parts of an embedded
    /// complex vector of length `half`.
    pub fn paired(half: usize) -> Self {
        Self {
            groups: crate::partition::paired_blocks(half),
            dim: 2 * half,
        }
    }

    pub fn as_slice(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Strongly convex regularizer `f`. All variants are 1-strongly convex, so
/// `grad f*` is 1-Lipschitz.
#[derive(Debug, Clone, PartialEq)]
pub enum Regularizer {
    /// `f(x) = 1/2 ||x||^2`
    Quadratic,
    /// `f(x) = lambda ||x||_1 + 1/2 ||x||^2` over the reals.
    ElasticNet { lambda: f64 },
    /// `f(x) = lambda sum_g ||x_g||_2 + 1/2 ||x||^2`
    GroupElasticNet { lambda: f64, groups: Groups },
    /// `f(x) = lambda sum_j |x_j| + 1/2 ||x||^2` over the complex numbers.
    ComplexElasticNet { lambda: f64 },
}

impl Regularizer {
    pub fn elastic_net(lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(Self::ElasticNet { lambda })
    }

    pub fn complex_elastic_net(lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(Self::ComplexElasticNet { lambda })
    }

    pub fn group_elastic_net(lambda: f64, groups: Groups) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(Self::GroupElasticNet { lambda, groups })
    }

    /// The sparsity-promoting variant appropriate for field `T`.
    pub fn sparse_for<T: Scalar>(lambda: f64) -> Result<Self> {
        match T::FIELD {
            Field::Real => Self::elastic_net(lambda),
            Field::Complex => Self::complex_elastic_net(lambda),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Quadratic => "quadratic",
            Self::ElasticNet { .. } => "elastic-net",
            Self::GroupElasticNet { .. } => "group-elastic-net",
            Self::ComplexElasticNet { .. } => "complex-elastic-net",
        }
    }

    pub fn lambda(&self) -> f64 {
        match self {
            Self::Quadratic => 0.0,
            Self::ElasticNet { lambda } | Self::GroupElasticNet { lambda, .. } | Self::ComplexElasticNet { lambda } => {
                *lambda
            }
        }
    }

    /// Strong convexity modulus.
    pub fn alpha(&self) -> f64 {
        1.0
    }

    /// Lipschitz constant of `grad f*`, `1/alpha`.
    pub fn conj_lipschitz(&self) -> f64 {
        1.0 / self.alpha()
    }

    pub fn check_field<T: Scalar>(&self) -> Result<()> {
        let ok = match self {
            Self::ElasticNet { .. } => T::FIELD == Field::Real,
            Self::ComplexElasticNet { .. } => T::FIELD == Field::Complex,
            Self::Quadratic | Self::GroupElasticNet { .. } => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                variant: self.name(),
                field: T::FIELD.name(),
            })
        }
    }

    /// Checks field and, for groups, the vector length.
    pub fn check_compatible<T: Scalar>(&self, n: usize) -> Result<()> {
        self.check_field::<T>()?;
        if let Self::GroupElasticNet { groups, .. } = self {
            if groups.dim() != n {
                return Err(dim_mismatch(groups.dim(), n));
            }
        }
        Ok(())
    }

    /// `grad f*(x*)`.
    pub fn conj_gradient<T: Scalar>(&self, xstar: &[T]) -> Result<Vec<T>> {
        self.check_compatible::<T>(xstar.len())?;
        let mut out = vec![T::zero(); xstar.len()];
        self.conj_gradient_into(xstar, &mut out);
        Ok(out)
    }

    /// `out = grad f*(x*)` without compatibility checks; callers validate once
    /// with [`Regularizer::check_compatible`].
    #[inline]
    pub fn conj_gradient_into<T: Scalar>(&self, xstar: &[T], out: &mut [T]) {
        match self {
            Self::Quadratic => out.copy_from_slice(xstar),
            Self::ElasticNet { lambda } | Self::ComplexElasticNet { lambda } => {
                for (o, &v) in out.iter_mut().zip(xstar) {
                    *o = shrink_scalar(v, *lambda);
                }
            }
            Self::GroupElasticNet { lambda, groups } => group_shrinkage_into(xstar, *lambda, groups.as_slice(), out),
        }
    }

    /// `f(x)`.
    pub fn value<T: Scalar>(&self, x: &[T]) -> Result<f64> {
        self.check_compatible::<T>(x.len())?;
        let quad = 0.5 * norm2_sq(x);
        Ok(match self {
            Self::Quadratic => quad,
            Self::ElasticNet { lambda } | Self::ComplexElasticNet { lambda } => {
                lambda * x.iter().map(|v| v.modulus()).sum::<f64>() + quad
            }
            Self::GroupElasticNet { lambda, groups } => {
                let l21: f64 = groups
                    .as_slice()
                    .iter()
                    .map(|g| g.iter().map(|&i| x[i].abs2()).sum::<f64>().sqrt())
                    .sum();
                lambda * l21 + quad
            }
        })
    }

    /// `f*(x*) = 1/2 ||grad f*(x*)||^2` for every listed variant.
    pub fn conj_value<T: Scalar>(&self, xstar: &[T]) -> Result<f64> {
        Ok(0.5 * norm2_sq(&self.conj_gradient(xstar)?))
    }

    /// `f(grad f*(x*)) + f*(x*) - Re<grad f*(x*), x*>`, zero by Fenchel's equality.
    pub fn fenchel_gap<T: Scalar>(&self, xstar: &[T]) -> Result<f64> {
        let x = self.conj_gradient(xstar)?;
        Ok(self.value(&x)? + self.conj_value(xstar)? - real_inner(&x, xstar))
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda >= 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("lambda must be >= 0, got {lambda}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Complex64;
    use proptest::prelude::*;

    #[test]
    fn quadratic_is_identity() {
        let x = [1.0, -2.0];
        assert_eq!(Regularizer::Quadratic.conj_gradient(&x).unwrap(), x.to_vec());
        assert_eq!(Regularizer::Quadratic.value(&x).unwrap(), 2.5);
        assert_eq!(Regularizer::Quadratic.conj_value(&x).unwrap(), 2.5);
    }

    #[test]
    fn elastic_net_examples() {
        let f = Regularizer::elastic_net(2.0).unwrap();
        assert_eq!(f.conj_gradient(&[3.0, -1.0, 0.5]).unwrap(), vec![1.0, 0.0, 0.0]);
        let f1 = Regularizer::elastic_net(1.0).unwrap();
        assert_eq!(f1.value(&[2.0, 0.0]).unwrap(), 4.0);
        assert!(Regularizer::elastic_net(-1.0).is_err());
    }

    #[test]
    fn field_mismatch() {
        let f = Regularizer::elastic_net(1.0).unwrap();
        let z = [Complex64::new(1.0, 1.0)];
        assert!(matches!(f.conj_gradient(&z), Err(Error::FieldMismatch { .. })));
        let c = Regularizer::complex_elastic_net(1.0).unwrap();
        assert!(matches!(c.value(&[1.0]), Err(Error::FieldMismatch { .. })));
        assert!(c.conj_gradient(&z).is_ok());
        let g = Regularizer::group_elastic_net(1.0, Groups::paired(2)).unwrap();
        assert!(g.conj_gradient(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn groups_must_partition() {
        assert!(Groups::new(vec![vec![0, 1], vec![1]]).is_err());
        assert!(Groups::new(vec![vec![0, 2]]).is_err());
        assert!(Groups::new(vec![vec![1], vec![0]]).is_ok());
    }

    /// Central-difference gradient of `f*`, independent of the shrinkage code path
    /// except through `conj_value`.
    fn fd_gradient(f: &Regularizer, x: &[f64]) -> Vec<f64> {
        let h = 1e-6;
        (0..x.len())
            .map(|i| {
                let mut p = x.to_vec();
                let mut m = x.to_vec();
                p[i] += h;
                m[i] -= h;
                (f.conj_value(&p).unwrap() - f.conj_value(&m).unwrap()) / (2.0 * h)
            })
            .collect()
    }

    fn real_variants(n: usize, lambda: f64) -> Vec<Regularizer> {
        let groups: Vec<Vec<usize>> = (0..n).collect::<Vec<_>>().chunks(2).map(<[usize]>::to_vec).collect();
        vec![
            Regularizer::Quadratic,
            Regularizer::elastic_net(lambda).unwrap(),
            Regularizer::group_elastic_net(lambda, Groups::new(groups).unwrap()).unwrap(),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]

        #[test]
        fn conj_gradient_matches_finite_differences(
            x in prop::collection::vec(-6.0f64..6.0, 2..9),
            lambda in 0.1f64..3.0,
        ) {
            for f in real_variants(x.len(), lambda) {
                // stay away from the kinks |x_j| = lambda and ||x_g|| = lambda
                let near_kink = x.iter().any(|v| (v.abs() - lambda).abs() < 1e-3)
                    || x.chunks(2).any(|g| (g.iter().map(|v| v * v).sum::<f64>().sqrt() - lambda).abs() < 1e-3);
                prop_assume!(!near_kink);
                let g = f.conj_gradient(&x).unwrap();
                let fd = fd_gradient(&f, &x);
                for (a, b) in g.iter().zip(&fd) {
                    prop_assert!((a - b).abs() <= 1e-6 * (1.0 + a.abs()), "{} vs {}", a, b);
                }
            }
        }

        #[test]
        fn fenchel_identity_and_nonexpansiveness(
            pairs in prop::collection::vec((-8.0f64..8.0, -8.0f64..8.0), 2..10),
            lambda in 0.0f64..4.0,
        ) {
            let u: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let v: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            for f in real_variants(u.len(), lambda) {
                prop_assert!(f.fenchel_gap(&u).unwrap().abs() <= 1e-10 * (1.0 + crate::matrix::norm2_sq(&u)));
                let du = f.conj_gradient(&u).unwrap();
                let dv = f.conj_gradient(&v).unwrap();
                let scale = crate::matrix::dist2(&u, &v);
                prop_assert!(crate::matrix::dist2(&du, &dv) <= f.conj_lipschitz() * scale + 1e-12 * (1.0 + scale));
            }
            let cu: Vec<Complex64> = pairs.iter().map(|p| Complex64::new(p.0, p.1)).collect();
            let c = Regularizer::complex_elastic_net(lambda).unwrap();
            prop_assert!(c.fenchel_gap(&cu).unwrap().abs() <= 1e-10 * (1.0 + crate::matrix::norm2_sq(&cu)));
        }
    }
}
