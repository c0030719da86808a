use std::io;
use std::time::Duration;

use thiserror::Error;
use web_time::Instant;

use crate::error::{dim_mismatch, Error, Result};
use crate::matrix::{dotc, dotu, norm2_sq, DenseMatrix};
use crate::partition::BlockKind;
use crate::rng::{RngStream, SOLVER_STREAM};
use crate::scalar::Scalar;

use super::{SolverConfig, SolverState, ZStepsize};

/// Denominator floor for the residual-adaptive stepsize.
const ADAPTIVE_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    MaxIterations,
    ToleranceMet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

/// Receives read-only snapshots at every checkpoint.
pub trait Observer<T: Scalar> {
    fn checkpoint(&mut self, state: &SolverState<T>) -> io::Result<Control>;
}

impl<T: Scalar, F> Observer<T> for F
where
    F: FnMut(&SolverState<T>) -> io::Result<Control>,
{
    fn checkpoint(&mut self, state: &SolverState<T>) -> io::Result<Control> {
        self(state)
    }
}

/// Observer that never stops the run.
impl<T: Scalar> Observer<T> for () {
    fn checkpoint(&mut self, _: &SolverState<T>) -> io::Result<Control> {
        Ok(Control::Continue)
    }
}

#[derive(Debug, Clone)]
pub struct SolverReport<T> {
    pub state: SolverState<T>,
    pub iterations: u64,
    pub checkpoints: Vec<u64>,
    pub wall_time: Duration,
    pub stop_reason: StopReason,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] Error),
    #[error("checkpoint hook failed: {0}")]
    Hook(#[from] io::Error),
}

/// A validated GERK problem: matrix, right-hand side, configuration and the
/// column-major copy of `A` used by the `z*` update.
#[derive(Debug)]
pub struct Gerk<'a, T: Scalar> {
    a: &'a DenseMatrix<T>,
    columns: DenseMatrix<T>,
    b: &'a [T],
    cfg: &'a SolverConfig,
}

impl<'a, T: Scalar> Gerk<'a, T> {
    pub fn new(a: &'a DenseMatrix<T>, b: &'a [T], cfg: &'a SolverConfig) -> Result<Self> {
        let (m, n) = a.shape();
        if b.len() != m {
            return Err(dim_mismatch(m, b.len()));
        }
        if cfg.row_partition.kind() != BlockKind::Row || cfg.row_partition.dim() != m {
            return Err(Error::InvalidPartition(format!("row partition must cover {m} rows")));
        }
        if cfg.col_partition.kind() != BlockKind::Column || cfg.col_partition.dim() != n {
            return Err(Error::InvalidPartition(format!(
                "column partition must cover {n} columns"
            )));
        }
        if cfg.checkpoint_interval == 0 {
            return Err(Error::InvalidParameter("checkpoint interval must be >= 1".into()));
        }
        cfg.regularizer.check_compatible::<T>(n)?;
        Ok(Self {
            a,
            columns: a.transpose(),
            b,
            cfg,
        })
    }

    pub fn config(&self) -> &SolverConfig {
        self.cfg
    }

    /// `x0 = x0* = 0`, `z0* = b`, `z0 = grad g*(b)`.
    pub fn initial_state(&self) -> SolverState<T> {
        let n = self.a.cols();
        let xstar = vec![T::zero(); n];
        let mut x = vec![T::zero(); n];
        self.cfg.regularizer.conj_gradient_into(&xstar, &mut x);
        let (zstar, z) = if self.cfg.z_update {
            (self.b.to_vec(), self.cfg.misfit.gradient(self.b))
        } else {
            (Vec::new(), Vec::new())
        };
        SolverState {
            xstar,
            x,
            zstar,
            z,
            k: 0,
            rng: RngStream::with_stream(self.cfg.seed, SOLVER_STREAM),
        }
    }

    /// One iteration: `z*` update on a sampled column block (if enabled), then
    /// the `x*` update on a sampled row block.
    pub fn step(&self, st: &mut SolverState<T>) {
        let cfg = self.cfg;
        if cfg.z_update {
            let j = cfg.col_partition.sample(&mut st.rng);
            self.z_update(st, j);
        }
        let i = cfg.row_partition.sample(&mut st.rng);
        self.x_update(st, i);
        st.k += 1;
    }

    fn z_update(&self, st: &mut SolverState<T>, j: usize) {
        let cfg = self.cfg;
        let cols = cfg.col_partition.block(j);
        let lip = cfg.misfit.lipschitz();
        let constant = 1.0 / (lip * cfg.col_partition.block_sq_norm(j));

        if let [c] = cols {
            // single column a~: z* -= t (a~^H z) a~
            let col = self.columns.row(*c);
            let v = dotc(col, &st.z);
            // for one column the adaptive ratio reduces to the constant rule
            let t = constant;
            let coef = v.scale(t);
            for (zs, &a) in st.zstar.iter_mut().zip(col) {
                *zs -= coef * a;
            }
        } else {
            let v: Vec<T> = cols.iter().map(|&c| dotc(self.columns.row(c), &st.z)).collect();
            let mut u = vec![T::zero(); st.zstar.len()];
            for (&c, &vc) in cols.iter().zip(&v) {
                for (ui, &a) in u.iter_mut().zip(self.columns.row(c)) {
                    *ui += a * vc;
                }
            }
            let t = match cfg.z_stepsize {
                ZStepsize::Constant => constant,
                ZStepsize::ResidualAdaptive => adaptive_ratio(norm2_sq(&v), norm2_sq(&u), lip).unwrap_or(constant),
            };
            for (zs, &ui) in st.zstar.iter_mut().zip(&u) {
                *zs -= ui.scale(t);
            }
        }
        cfg.misfit.gradient_into(&st.zstar, &mut st.z);
    }

    fn x_update(&self, st: &mut SolverState<T>, i: usize) {
        let cfg = self.cfg;
        let rows = cfg.row_partition.block(i);
        let t = 1.0 / (cfg.regularizer.conj_lipschitz() * cfg.row_partition.block_sq_norm(i));
        for &r in rows {
            let row = self.a.row(r);
            // w_r = <a_r, x> - b_r + z*_r
            let mut w = dotu(row, &st.x) - self.b[r];
            if cfg.z_update {
                w += st.zstar[r];
            }
            let coef = w.scale(t);
            for (xs, &a) in st.xstar.iter_mut().zip(row) {
                *xs -= a.conj() * coef;
            }
        }
        cfg.regularizer.conj_gradient_into(&st.xstar, &mut st.x);
    }

    /// Runs from `state` until the iteration budget is spent or an observer
    /// asks to stop. Observers fire at `k = 0`, every checkpoint interval, and
    /// at the final iterate.
    pub fn run_from(&self, mut state: SolverState<T>, observer: &mut impl Observer<T>) -> io::Result<SolverReport<T>> {
        let start = Instant::now();
        let interval = self.cfg.checkpoint_interval;
        let budget = self.cfg.max_iterations;
        let mut checkpoints = Vec::new();
        let mut stop_reason = StopReason::MaxIterations;
        let mut last_checkpoint = None;

        let first = state.k;
        loop {
            if (state.k - first).is_multiple_of(interval) {
                checkpoints.push(state.k);
                last_checkpoint = Some(state.k);
                if observer.checkpoint(&state)? == Control::Stop {
                    stop_reason = StopReason::ToleranceMet;
                    break;
                }
            }
            if state.k - first >= budget {
                break;
            }
            self.step(&mut state);
        }
        if stop_reason == StopReason::MaxIterations && last_checkpoint != Some(state.k) {
            checkpoints.push(state.k);
            if observer.checkpoint(&state)? == Control::Stop {
                stop_reason = StopReason::ToleranceMet;
            }
        }
        Ok(SolverReport {
            iterations: state.k - first,
            state,
            checkpoints,
            wall_time: start.elapsed(),
            stop_reason,
        })
    }

    pub fn run(&self, observer: &mut impl Observer<T>) -> io::Result<SolverReport<T>> {
        self.run_from(self.initial_state(), observer)
    }
}

/// Executes up to `cfg.max_iterations` GERK steps on `A x = b`.
pub fn run<T: Scalar>(
    a: &DenseMatrix<T>,
    b: &[T],
    cfg: &SolverConfig,
    observer: &mut impl Observer<T>,
) -> std::result::Result<SolverReport<T>, RunError> {
    let solver = Gerk::new(a, b, cfg)?;
    Ok(solver.run(observer)?)
}

fn adaptive_ratio(num: f64, den: f64, lipschitz: f64) -> Option<f64> {
    if den <= ADAPTIVE_FLOOR {
        None
    } else {
        Some(num / den / lipschitz)
    }
}

/// `(1/L) ||A~_j^H z||^2 / ||A~_j A~_j^H z||^2`, or `constant` when the
/// denominator is at most `1e-300` (z orthogonal to the block's range).
pub fn residual_adaptive_z_stepsize<T: Scalar>(
    z: &[T],
    block: &DenseMatrix<T>,
    lipschitz: f64,
    constant: f64,
) -> Result<f64> {
    let v = block.adjoint_mul_vec(z)?;
    let u = block.mul_vec(&v)?;
    Ok(adaptive_ratio(norm2_sq(&v), norm2_sq(&u), lipschitz).unwrap_or(constant))
}
