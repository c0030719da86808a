use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use gerk_core::certificate::{gamma_hat, verify_error_bound, MAX_ENUM_COLS};
use gerk_core::convex::Regularizer;
use gerk_core::embed::{embed_matrix, embed_vec};
use gerk_core::generate::make_rank_deficient;
use gerk_core::io::{write_atomic, MatrixData, VectorData};
use gerk_core::oracle::{constrained_regularizer_min, range_projection_quadratic, DEFAULT_MAX_ITER};
use gerk_core::rng::RngStream;
use gerk_core::{DenseMatrix, Error, Scalar};

use crate::config::FileConfig;
use crate::fail::{Failure, EXIT_DIMENSION, EXIT_FAILURE};
use crate::inputs::{read_matrix, read_vector};
use crate::Common;

pub const CERTIFICATE_HEADER: &str = "# gerk certificate v1";

const ORACLE_TOL: f64 = 1e-12;

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// MatrixMarket file holding A (complex input is certified through its real embedding).
    #[arg(long, conflicts_with_all = ["rows", "cols", "rank"])]
    matrix: Option<PathBuf>,
    /// Planted solution; the target is then A xhat.
    #[arg(long, conflicts_with = "rhs")]
    xhat: Option<PathBuf>,
    /// Right-hand side; the target is its projection onto the range of A.
    #[arg(long)]
    rhs: Option<PathBuf>,
    /// Random instance instead of --matrix: rows, columns and rank.
    #[arg(long, requires_all = ["cols", "rank"])]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    sv_lo: f64,
    #[arg(long, default_value_t = 3.0)]
    sv_hi: f64,
    /// Sampled admissible pairs for the verification.
    #[arg(long)]
    samples: Option<usize>,
    /// File for the key=value record.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    common: Common,
}

fn to_real_vector(v: VectorData) -> Vec<f64> {
    match v {
        VectorData::Real(v) => v,
        VectorData::Complex(v) => embed_vec(&v),
    }
}

fn check_len(len: usize, want: usize, what: &str) -> Result<(), Failure> {
    if len == want {
        Ok(())
    } else {
        Err(Failure::new(
            EXIT_DIMENSION,
            format!("dimension mismatch: {what} has {len} entries, expected {want}"),
        ))
    }
}

pub fn cmd_certify(args: CertifyArgs, file: &FileConfig) -> Result<(), Failure> {
    let common = args.common.merge(file);
    let lambda = common.lambda.unwrap_or(0.0);
    let seed = common.seed.unwrap_or(0);
    let samples = args.samples.or(file.samples).unwrap_or(1000);
    let mut gen_rng = RngStream::with_stream(seed, 0);

    let (a, planted): (DenseMatrix<f64>, Option<Vec<f64>>) = match (&args.matrix, args.rows) {
        (Some(path), _) => match read_matrix(path)? {
            MatrixData::Real(a) => (a, None),
            MatrixData::Complex(a) => (embed_matrix(&a), None),
        },
        (None, Some(m)) => {
            let n = args.cols.expect("clap enforces --cols");
            let r = args.rank.expect("clap enforces --rank");
            if n > MAX_ENUM_COLS {
                return Err(Error::TooManyColumns {
                    cols: n,
                    max: MAX_ENUM_COLS,
                }
                .into());
            }
            let a = make_rank_deficient::<f64>(m, n, r, args.sv_lo, args.sv_hi, &mut gen_rng)?;
            let x = (0..n)
                .map(|_| {
                    if gen_rng.uniform() < 0.5 {
                        f64::gaussian(&mut gen_rng)
                    } else {
                        0.0
                    }
                })
                .collect();
            (a, Some(x))
        }
        (None, None) => return Err(Failure::input("give --matrix or --rows/--cols/--rank")),
    };
    let (m, n) = a.shape();
    // Refuse before spending time on the oracle.
    if n > MAX_ENUM_COLS {
        return Err(Error::TooManyColumns {
            cols: n,
            max: MAX_ENUM_COLS,
        }
        .into());
    }

    let yhat = if let Some(path) = &args.xhat {
        let x = to_real_vector(read_vector(path)?);
        check_len(x.len(), n, &path.display().to_string())?;
        a.mul_vec(&x)?
    } else if let Some(path) = &args.rhs {
        let b = to_real_vector(read_vector(path)?);
        check_len(b.len(), m, &path.display().to_string())?;
        range_projection_quadratic(&a, &b)?
    } else if let Some(x) = &planted {
        a.mul_vec(x)?
    } else {
        return Err(Failure::input("give --xhat or --rhs with --matrix"));
    };

    let f = Regularizer::elastic_net(lambda)?;
    let xhat = constrained_regularizer_min(&a, &yhat, &f, ORACLE_TOL, DEFAULT_MAX_ITER)
        .map_err(|e| Failure::new(EXIT_FAILURE, format!("minimum-regularizer solution: {e}")))?
        .value;
    let cert = gamma_hat(&a, &xhat, lambda)?;
    let report = verify_error_bound(
        &a,
        &yhat,
        &f,
        &xhat,
        cert.gamma,
        samples,
        &mut RngStream::with_stream(seed, 1),
    )?;

    let mut record = format!("{CERTIFICATE_HEADER}\n");
    for (k, v) in [
        ("sigma_tilde_min", cert.sigma_tilde_min.to_string()),
        ("sigma_min_plus", cert.sigma_min_plus.to_string()),
        ("xhat_min_abs", cert.xhat_min_abs.to_string()),
        ("lambda", cert.lambda.to_string()),
        ("gamma", cert.gamma.to_string()),
        ("n_enumerated_subsets", cert.n_enumerated_subsets.to_string()),
        ("samples", report.samples.to_string()),
        ("violations", report.violations.to_string()),
        ("max_ratio", report.max_ratio.to_string()),
    ] {
        writeln!(record, "{k}={v}").expect("writing to a String");
    }
    write_atomic(&args.out, record.as_bytes()).map_err(|e| Failure::write(&args.out, e))?;
    print!("{record}");
    Ok(())
}
