use std::fmt;
use std::str::FromStr;

use crate::convex::{Misfit, Regularizer};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

use super::SolverConfig;

/// Named solver configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preset {
    Rk,
    Srk,
    Rek,
    /// sparse `f`, quadratic `g`
    GerkAd,
    /// sparse `f`, Huber `g`
    GerkBd,
}

impl Preset {
    pub const ALL: [Preset; 5] = [Preset::Rk, Preset::Srk, Preset::Rek, Preset::GerkAd, Preset::GerkBd];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Rk => "rk",
            Preset::Srk => "srk",
            Preset::Rek => "rek",
            Preset::GerkAd => "gerk_ad",
            Preset::GerkBd => "gerk_bd",
        }
    }

    pub fn uses_z(self) -> bool {
        matches!(self, Preset::Rek | Preset::GerkAd | Preset::GerkBd)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PresetParams {
    pub lambda: Option<f64>,
    pub eps: Option<f64>,
    pub tau: Option<f64>,
}

impl PresetParams {
    pub fn lambda(lambda: f64) -> Self {
        Self {
            lambda: Some(lambda),
            ..Self::default()
        }
    }

    pub fn huber(lambda: f64, eps: f64, tau: f64) -> Self {
        Self {
            lambda: Some(lambda),
            eps: Some(eps),
            tau: Some(tau),
        }
    }
}

/// Builds the configuration for `which` on `a` with singleton blocks and
/// uniform sampling. On complex data the sparse regularizer is the complex
/// elastic net (phase-preserving shrinkage).
pub fn preset<T: Scalar>(which: Preset, params: &PresetParams, a: &DenseMatrix<T>) -> Result<SolverConfig> {
    let lambda = || params.lambda.ok_or(Error::MissingParameter("lambda"));
    let (f, g) = match which {
        Preset::Rk | Preset::Rek => (Regularizer::Quadratic, Misfit::Quadratic),
        Preset::Srk | Preset::GerkAd => (Regularizer::sparse_for::<T>(lambda()?)?, Misfit::Quadratic),
        Preset::GerkBd => {
            let f = Regularizer::sparse_for::<T>(lambda()?)?;
            let eps = params.eps.ok_or(Error::MissingParameter("eps"))?;
            let tau = params.tau.ok_or(Error::MissingParameter("tau"))?;
            (f, Misfit::huber_quad(eps, tau)?)
        }
    };
    SolverConfig::new(f, g, which.uses_z(), a)
}
