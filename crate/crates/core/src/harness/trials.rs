use std::collections::BTreeMap;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::convex::Misfit;
use crate::error::{Error, Result};
use crate::matrix::sub;
use crate::oracle::range_projection_quadratic;
use crate::rng::{RngStream, GENERATOR_STREAM};
use crate::scalar::Scalar;
use crate::solver::{preset, Control, Gerk, Preset, PresetParams, SolverState};

use super::metrics::{sparsity_count, AggregateBand, Metric, MetricRecorder, MetricTrace};
use super::ProblemInstance;

#[derive(Debug, Clone, PartialEq)]
pub struct TrialPlan {
    pub presets: Vec<Preset>,
    pub params: PresetParams,
    /// Misfit for the `rel_grad_misfit` metric.
    pub misfit: Misfit,
    pub trials: usize,
    pub iterations: u64,
    pub checkpoint_interval: u64,
    pub base_seed: u64,
}

#[derive(Debug, Clone)]
pub struct PresetOutcome<T> {
    pub preset: Preset,
    /// One per trial, in trial order.
    pub traces: Vec<MetricTrace>,
    pub finals: Vec<Vec<T>>,
    pub bands: BTreeMap<Metric, AggregateBand>,
}

#[derive(Debug, Clone)]
pub struct TrialOutcome<T> {
    pub presets: Vec<PresetOutcome<T>>,
}

impl<T> TrialOutcome<T> {
    pub fn get(&self, p: Preset) -> Option<&PresetOutcome<T>> {
        self.presets.iter().find(|o| o.preset == p)
    }
}

/// Generator stream for trial `t`: seed `base_seed + t`.
pub fn instance_rng(base_seed: u64, trial: usize) -> RngStream {
    RngStream::with_stream(base_seed.wrapping_add(trial as u64), GENERATOR_STREAM)
}

fn run_one<T: Scalar>(
    inst: &ProblemInstance<T>,
    z_target: Option<&[T]>,
    which: Preset,
    plan: &TrialPlan,
    seed: u64,
) -> Result<(MetricTrace, Vec<T>)> {
    let cfg = preset(which, &plan.params, &inst.a)?
        .with_max_iterations(plan.iterations)
        .with_checkpoint_interval(plan.checkpoint_interval)
        .with_seed(seed);
    let track_z = which.uses_z() && cfg.misfit.is_quadratic();
    let mut rec = MetricRecorder::new(inst, plan.misfit, z_target.filter(|_| track_z));
    let solver = Gerk::new(&inst.a, &inst.b, &cfg)?;
    let mut hook = |s: &SolverState<T>| {
        rec.record(s);
        Ok(Control::Continue)
    };
    let report = solver.run(&mut hook).expect("recording hook is infallible");
    Ok((rec.trace, report.state.x))
}

/// Runs every preset on `plan.trials` fresh instances. Trial `t` draws its
/// instance from seed `base_seed + t` and seeds all solvers with the same
/// value. Results are ordered by trial regardless of scheduling.
pub fn run_trials<T, G>(generator: G, plan: &TrialPlan) -> Result<TrialOutcome<T>>
where
    T: Scalar,
    G: Fn(&mut RngStream) -> Result<ProblemInstance<T>> + Sync,
{
    if plan.trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is required".into()));
    }
    let trials: Vec<usize> = (0..plan.trials).collect();
    let make = |&t: &usize| -> Result<(ProblemInstance<T>, Vec<T>)> {
        let inst = generator(&mut instance_rng(plan.base_seed, t))?;
        let target = sub(&inst.b, &range_projection_quadratic(&inst.a, &inst.b)?);
        Ok((inst, target))
    };
    #[cfg(feature = "parallel")]
    let instances: Vec<_> = trials.par_iter().map(make).collect::<Result<_>>()?;
    #[cfg(not(feature = "parallel"))]
    let instances: Vec<_> = trials.iter().map(make).collect::<Result<_>>()?;

    let jobs: Vec<(usize, Preset)> = trials
        .iter()
        .flat_map(|&t| plan.presets.iter().map(move |&p| (t, p)))
        .collect();
    let work = |&(t, p): &(usize, Preset)| {
        let (inst, target) = &instances[t];
        run_one(inst, Some(target), p, plan, plan.base_seed.wrapping_add(t as u64))
    };
    #[cfg(feature = "parallel")]
    let results: Vec<_> = jobs.par_iter().map(work).collect::<Result<_>>()?;
    #[cfg(not(feature = "parallel"))]
    let results: Vec<_> = jobs.iter().map(work).collect::<Result<_>>()?;

    let k = plan.presets.len();
    let presets = plan
        .presets
        .iter()
        .enumerate()
        .map(|(pi, &p)| {
            let (traces, finals): (Vec<_>, Vec<_>) = (0..plan.trials).map(|t| results[t * k + pi].clone()).unzip();
            let bands = Metric::ALL
                .iter()
                .filter_map(|&m| AggregateBand::from_traces(&traces, m).map(|b| (m, b)))
                .collect();
            PresetOutcome {
                preset: p,
                traces,
                finals,
                bands,
            }
        })
        .collect();
    Ok(TrialOutcome { presets })
}

/// Min/median/max of the final-iterate sparsity across trials.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsityRow {
    pub preset: Preset,
    pub min: usize,
    pub median: f64,
    pub max: usize,
}

pub fn sparsity_table<T: Scalar>(finals: &[(Preset, &[Vec<T>])], threshold: f64) -> Vec<SparsityRow> {
    finals
        .iter()
        .filter(|(_, xs)| !xs.is_empty())
        .map(|&(preset, xs)| {
            let mut counts: Vec<usize> = xs.iter().map(|x| sparsity_count(x, threshold)).collect();
            counts.sort_unstable();
            let sorted: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
            SparsityRow {
                preset,
                min: counts[0],
                median: super::metrics::quantile(&sorted, 0.5),
                max: counts[counts.len() - 1],
            }
        })
        .collect()
}

impl<T: Scalar> TrialOutcome<T> {
    pub fn sparsity_table(&self, threshold: f64) -> Vec<SparsityRow> {
        let finals: Vec<(Preset, &[Vec<T>])> = self.presets.iter().map(|o| (o.preset, o.finals.as_slice())).collect();
        sparsity_table(&finals, threshold)
    }
}
