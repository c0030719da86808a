use std::path::PathBuf;

use clap::Args;
use gerk_core::harness::{
    format_sparsity_table, write_experiment, Experiment, ExperimentSpec, Profile, TrialOutcome, SPARSITY_THRESHOLD,
};
use gerk_core::scalar::Field;
use gerk_core::solver::Preset;
use gerk_core::{Complex64, Error, Scalar};

use crate::config::FileConfig;
use crate::fail::Failure;
use crate::inputs::parse_field;
use crate::Common;

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// i (least squares) or ii (impulsive noise)
    #[arg(long)]
    which: Option<String>,
    /// desk, paper, or custom (every generator flag required)
    #[arg(long)]
    profile: Option<String>,
    /// Comma-separated preset list (default: the experiment's set).
    #[arg(long, value_delimiter = ',')]
    presets: Option<Vec<String>>,
    /// Iteration budget in multiples of m (required for the paper profile).
    #[arg(long)]
    epochs: Option<u64>,
    /// Checkpoint interval in iterations (default: m).
    #[arg(long)]
    checkpoint: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Noise level (the norm of the noise vector).
    #[arg(long)]
    noise_level: Option<f64>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    rank: Option<usize>,
    /// Nonzeros in the planted solution.
    #[arg(long)]
    sparsity: Option<usize>,
    #[arg(long)]
    sv_lo: Option<f64>,
    #[arg(long)]
    sv_hi: Option<f64>,
    /// Output root; files go to OUT/<experiment>/<preset>/<metric>.csv.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    common: Common,
}

fn required<T>(v: Option<T>, name: &'static str) -> Result<T, Failure> {
    v.ok_or(Failure::from(Error::MissingParameter(name)))
}

/// Profile defaults, then config file, then flags.
fn build_spec(args: &ExperimentArgs, common: &Common, file: &FileConfig) -> Result<ExperimentSpec, Failure> {
    let which: Experiment = required(args.which.clone().or_else(|| file.which.clone()), "which")?.parse()?;
    let profile_name = args
        .profile
        .clone()
        .or_else(|| file.profile.clone())
        .unwrap_or_else(|| "desk".into());
    let epochs = args.epochs.or(file.epochs);
    let m = args.m.or(file.m);
    let n = args.n.or(file.n);
    let rank = args.rank.or(file.rank);
    let sparsity = args.sparsity.or(file.sparsity);
    let sv_lo = args.sv_lo.or(file.sv_lo);
    let sv_hi = args.sv_hi.or(file.sv_hi);
    let trials = args.trials.or(file.trials);

    let mut spec = if profile_name.trim() == "custom" {
        let mut spec = ExperimentSpec::from_profile(Profile::Desk, which, Some(required(epochs, "epochs")?))?;
        spec.gen.m = required(m, "m")?;
        spec.gen.n = required(n, "n")?;
        spec.gen.rank = required(rank, "rank")?;
        spec.gen.sparsity = required(sparsity, "sparsity")?;
        spec.gen.sv_lo = required(sv_lo, "sv_lo")?;
        spec.gen.sv_hi = required(sv_hi, "sv_hi")?;
        spec.trials = required(trials, "trials")?;
        spec.checkpoint_interval = spec.gen.m as u64;
        spec
    } else {
        let profile: Profile = profile_name.parse()?;
        let mut spec = ExperimentSpec::from_profile(profile, which, epochs)?;
        if let Some(v) = m {
            spec.gen.m = v;
            spec.checkpoint_interval = v as u64;
        }
        spec.gen.n = n.unwrap_or(spec.gen.n);
        spec.gen.rank = rank.unwrap_or(spec.gen.rank);
        spec.gen.sparsity = sparsity.unwrap_or(spec.gen.sparsity);
        spec.gen.sv_lo = sv_lo.unwrap_or(spec.gen.sv_lo);
        spec.gen.sv_hi = sv_hi.unwrap_or(spec.gen.sv_hi);
        spec.trials = trials.unwrap_or(spec.trials);
        spec
    };
    if let Some(v) = args.noise_level.or(file.noise_level) {
        spec.gen.noise_level = v;
    }
    spec.lambda = common.lambda.unwrap_or(spec.lambda);
    spec.eps = common.eps.unwrap_or(spec.eps);
    spec.tau = common.tau.unwrap_or(spec.tau);
    spec.base_seed = common.seed.unwrap_or(spec.base_seed);
    spec.checkpoint_interval = args.checkpoint.or(file.checkpoint).unwrap_or(spec.checkpoint_interval);
    if let Some(list) = args.presets.clone().or_else(|| file.presets.clone()) {
        spec.presets = list.iter().map(|s| s.parse()).collect::<Result<Vec<Preset>, _>>()?;
    }
    if spec.trials == 0 {
        return Err(Failure::input("trials must be at least 1"));
    }
    if spec.epochs == 0 {
        return Err(Failure::input("epochs must be at least 1"));
    }
    Ok(spec)
}

fn finish<T: Scalar>(spec: &ExperimentSpec, out: &std::path::Path) -> Result<(), Failure> {
    let outcome: TrialOutcome<T> = spec.run()?;
    write_experiment(out, spec.experiment.name(), &outcome).map_err(|e| Failure::write(out, e))?;
    print!("{}", format_sparsity_table(&outcome.sparsity_table(SPARSITY_THRESHOLD)));
    Ok(())
}

pub fn cmd_experiment(args: ExperimentArgs, file: &FileConfig) -> Result<(), Failure> {
    let common = args.common.clone().merge(file);
    let spec = build_spec(&args, &common, file)?;
    let field = match &common.field {
        Some(f) => parse_field(f)?,
        None => Field::Real,
    };
    match field {
        Field::Real => finish::<f64>(&spec, &args.out),
        Field::Complex => finish::<Complex64>(&spec, &args.out),
    }
}
