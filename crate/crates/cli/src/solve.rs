use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::Args;
use gerk_core::harness::{sparsity_count, SPARSITY_THRESHOLD};
use gerk_core::io::{format_vector, write_atomic};
use gerk_core::matrix::{norm2, sub};
use gerk_core::scalar::Field;
use gerk_core::solver::{preset, run, Control, Preset, PresetParams, RunError};
use gerk_core::{DenseMatrix, Scalar};

use crate::config::FileConfig;
use crate::fail::Failure;
use crate::inputs::*;
use crate::Common;

pub const METRICS_HEADER: &str = "# gerk metrics v1";

/// Epochs run when neither --iterations nor --epochs is given.
const DEFAULT_EPOCHS: u64 = 100;

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// MatrixMarket file holding A.
    #[arg(long)]
    matrix: PathBuf,
    /// CSV file holding b.
    #[arg(long)]
    rhs: PathBuf,
    /// rk, srk, rek, gerk_ad or gerk_bd
    #[arg(long)]
    preset: Option<String>,
    /// Iteration budget.
    #[arg(long, conflicts_with = "epochs")]
    iterations: Option<u64>,
    /// Iteration budget in multiples of the row count.
    #[arg(long)]
    epochs: Option<u64>,
    /// Metrics are recorded every this many iterations (default: rows).
    #[arg(long)]
    checkpoint: Option<u64>,
    /// Directory for solution.csv and metrics.csv.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    common: Common,
}

struct Settings {
    preset: Preset,
    params: PresetParams,
    iterations: Option<u64>,
    epochs: u64,
    checkpoint: Option<u64>,
    seed: u64,
    out: PathBuf,
}

pub fn cmd_solve(args: SolveArgs, file: &FileConfig) -> Result<(), Failure> {
    let common = args.common.merge(file);
    let name = args
        .preset
        .or_else(|| file.preset.clone())
        .unwrap_or_else(|| "rek".into());
    let iterations = args.iterations.or(file.iterations);
    let settings = Settings {
        preset: name.parse()?,
        params: PresetParams {
            lambda: common.lambda,
            eps: common.eps,
            tau: common.tau,
        },
        iterations,
        epochs: args.epochs.or(file.epochs).unwrap_or(DEFAULT_EPOCHS),
        checkpoint: args.checkpoint.or(file.checkpoint),
        seed: common.seed.unwrap_or(0),
        out: args.out,
    };

    let a = read_matrix(&args.matrix)?;
    let b = read_vector(&args.rhs)?;
    let field = match &common.field {
        Some(f) => parse_field(f)?,
        None if matrix_field(&a) == Field::Complex || vector_field(&b) == Field::Complex => Field::Complex,
        None => Field::Real,
    };
    match field {
        Field::Real => solve_typed(
            &real_matrix(a, &args.matrix)?,
            &real_vector(b, &args.rhs)?,
            &settings,
            &args.rhs,
        ),
        Field::Complex => solve_typed(&complex_matrix(a), &complex_vector(b), &settings, &args.rhs),
    }
}

fn solve_typed<T: Scalar>(a: &DenseMatrix<T>, b: &[T], s: &Settings, rhs_path: &Path) -> Result<(), Failure> {
    let (m, _) = a.shape();
    if b.len() != m {
        return Err(Failure::new(
            crate::fail::EXIT_DIMENSION,
            format!(
                "dimension mismatch: matrix has {m} rows but {} holds {} entries",
                rhs_path.display(),
                b.len()
            ),
        ));
    }
    let iterations = s.iterations.unwrap_or(s.epochs.saturating_mul(m as u64));
    let cfg = preset(s.preset, &s.params, a)?
        .with_max_iterations(iterations)
        .with_checkpoint_interval(s.checkpoint.unwrap_or(m as u64))
        .with_seed(s.seed);

    let b_norm = norm2(b);
    let rel = |v: f64| if b_norm > 0.0 { v / b_norm } else { v };
    let mut metrics = format!("{METRICS_HEADER}\niteration,rel_residual,rel_grad,sparsity\n");
    let mut hook = |st: &gerk_core::solver::SolverState<T>| {
        let r = sub(b, &a.mul_vec(&st.x).expect("validated shape"));
        let g = a.adjoint_mul_vec(&r).expect("validated shape");
        writeln!(
            metrics,
            "{},{:e},{:e},{}",
            st.k,
            rel(norm2(&r)),
            rel(norm2(&g)),
            sparsity_count(&st.x, SPARSITY_THRESHOLD)
        )
        .expect("writing to a String");
        Ok(Control::Continue)
    };
    let report = run(a, b, &cfg, &mut hook).map_err(|e| match e {
        RunError::Config(e) => Failure::from(e),
        RunError::Hook(e) => Failure::new(crate::fail::EXIT_FAILURE, e.to_string()),
    })?;

    let solution = s.out.join("solution.csv");
    write_atomic(&solution, format_vector(&report.state.x).as_bytes()).map_err(|e| Failure::write(&solution, e))?;
    let metrics_path = s.out.join("metrics.csv");
    write_atomic(&metrics_path, metrics.as_bytes()).map_err(|e| Failure::write(&metrics_path, e))?;

    let r = sub(b, &a.mul_vec(&report.state.x)?);
    println!(
        "{}: {} iterations, relative residual {:e}, wrote {}",
        s.preset,
        report.iterations,
        rel(norm2(&r)),
        s.out.display()
    );
    Ok(())
}
