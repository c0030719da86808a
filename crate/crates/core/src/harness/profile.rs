use std::fmt;
use std::str::FromStr;

use crate::convex::Misfit;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::scalar::Scalar;
use crate::solver::{Preset, PresetParams};

use super::instance::{gen_experiment_i, gen_experiment_ii, GenParams, ProblemInstance};
use super::trials::{run_trials, TrialOutcome, TrialPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    /// Noise orthogonal to the range, least-squares target.
    LeastSquares,
    /// Sparse large outliers, Huber misfit.
    Impulsive,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::LeastSquares => "i",
            Experiment::Impulsive => "ii",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "i" | "1" => Ok(Experiment::LeastSquares),
            "ii" | "2" => Ok(Experiment::Impulsive),
            other => Err(Error::InvalidParameter(format!(
                "unknown experiment `{other}` (expected i or ii)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Desk,
    Paper,
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "desk" => Ok(Profile::Desk),
            "paper" => Ok(Profile::Paper),
            other => Err(Error::InvalidParameter(format!(
                "unknown profile `{other}` (expected desk or paper)"
            ))),
        }
    }
}

/// Everything needed to regenerate one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub experiment: Experiment,
    pub gen: GenParams,
    pub lambda: f64,
    pub eps: f64,
    pub tau: f64,
    pub trials: usize,
    /// Iteration budget in epochs of `m` iterations.
    pub epochs: u64,
    /// Iterations between checkpoints.
    pub checkpoint_interval: u64,
    pub base_seed: u64,
    pub presets: Vec<Preset>,
}

pub const DESK_EPOCHS: u64 = 200;

impl ExperimentSpec {
    /// Profile defaults. The large profile has no agreed iteration budget, so
    /// `epochs` is required there.
    pub fn from_profile(profile: Profile, experiment: Experiment, epochs: Option<u64>) -> Result<Self> {
        let (gen, trials, epochs) = match profile {
            Profile::Desk => (
                GenParams {
                    m: 200,
                    n: 100,
                    rank: 50,
                    sparsity: 5,
                    noise_level: 5.0,
                    sv_lo: 0.1,
                    sv_hi: 10.0,
                },
                10,
                epochs.unwrap_or(DESK_EPOCHS),
            ),
            Profile::Paper => (
                GenParams {
                    m: 1000,
                    n: 500,
                    rank: 250,
                    sparsity: 25,
                    noise_level: 5.0,
                    sv_lo: 0.001,
                    sv_hi: match experiment {
                        Experiment::LeastSquares => 100.0,
                        Experiment::Impulsive => 10.0,
                    },
                },
                50,
                epochs.ok_or(Error::MissingParameter("epochs"))?,
            ),
        };
        let (lambda, presets) = match experiment {
            Experiment::LeastSquares => (5.0, vec![Preset::Srk, Preset::Rek, Preset::GerkAd]),
            Experiment::Impulsive => (10.0, vec![Preset::Srk, Preset::Rek, Preset::GerkAd, Preset::GerkBd]),
        };
        Ok(Self {
            experiment,
            checkpoint_interval: gen.m as u64,
            gen,
            lambda,
            eps: 1e-2,
            tau: 1e-3,
            trials,
            epochs,
            base_seed: 0,
            presets,
        })
    }

    /// Misfit used for the `rel_grad_misfit` metric.
    pub fn misfit(&self) -> Result<Misfit> {
        match self.experiment {
            Experiment::LeastSquares => Ok(Misfit::Quadratic),
            Experiment::Impulsive => Misfit::huber_quad(self.eps, self.tau),
        }
    }

    pub fn plan(&self) -> Result<TrialPlan> {
        if self.checkpoint_interval == 0 {
            return Err(Error::InvalidParameter("checkpoint interval must be >= 1".into()));
        }
        Ok(TrialPlan {
            presets: self.presets.clone(),
            params: PresetParams::huber(self.lambda, self.eps, self.tau),
            misfit: self.misfit()?,
            trials: self.trials,
            iterations: self.epochs.saturating_mul(self.gen.m as u64),
            checkpoint_interval: self.checkpoint_interval,
            base_seed: self.base_seed,
        })
    }

    pub fn generate<T: Scalar>(&self, rng: &mut RngStream) -> Result<ProblemInstance<T>> {
        match self.experiment {
            Experiment::LeastSquares => gen_experiment_i(&self.gen, rng),
            Experiment::Impulsive => gen_experiment_ii(&self.gen, rng),
        }
    }

    pub fn run<T: Scalar>(&self) -> Result<TrialOutcome<T>> {
        let plan = self.plan()?;
        run_trials(|rng| self.generate::<T>(rng), &plan)
    }
}
