//! Synthetic experiment families, multi-trial runs, quantile bands and
//! sparsity tables.

mod instance;
mod metrics;
mod output;
mod profile;
mod trials;

pub use instance::{gen_experiment_i, gen_experiment_ii, GenParams, NoiseKind, ProblemInstance};
pub use metrics::{
    five_numbers, quantile, sparsity_count, AggregateBand, Metric, MetricRecorder, MetricTrace, SPARSITY_THRESHOLD,
};
pub use output::{band_csv, format_sparsity_table, sparsity_csv, write_experiment, BAND_HEADER, SPARSITY_HEADER};
pub use profile::{Experiment, ExperimentSpec, Profile, DESK_EPOCHS};
pub use trials::{instance_rng, run_trials, sparsity_table, PresetOutcome, SparsityRow, TrialOutcome, TrialPlan};
