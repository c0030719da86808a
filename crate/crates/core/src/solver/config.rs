use crate::convex::{Misfit, Regularizer};
use crate::error::Result;
use crate::matrix::DenseMatrix;
use crate::partition::{BlockKind, BlockPartition};
use crate::scalar::Scalar;

/// Stepsize rule for the `z*` update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZStepsize {
    /// `1 / (L_{g*} ||A~_j||^2)`
    #[default]
    Constant,
    /// `(1/L_{g*}) ||A~_j^H z||^2 / ||A~_j A~_j^H z||^2`
    ResidualAdaptive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub regularizer: Regularizer,
    pub misfit: Misfit,
    pub row_partition: BlockPartition,
    pub col_partition: BlockPartition,
    pub z_stepsize: ZStepsize,
    /// `false` drops the `z*` recursion entirely (SRK / RK).
    pub z_update: bool,
    pub max_iterations: u64,
    pub checkpoint_interval: u64,
    pub seed: u64,
}

impl SolverConfig {
    /// Single-row and single-column blocks with uniform probabilities,
    /// checkpoints once per `m` iterations, no iteration budget yet.
    pub fn new<T: Scalar>(
        regularizer: Regularizer,
        misfit: Misfit,
        z_update: bool,
        a: &DenseMatrix<T>,
    ) -> Result<Self> {
        Ok(Self {
            regularizer,
            misfit,
            row_partition: BlockPartition::singletons(BlockKind::Row, a)?,
            col_partition: BlockPartition::singletons(BlockKind::Column, a)?,
            z_stepsize: ZStepsize::Constant,
            z_update,
            max_iterations: 0,
            checkpoint_interval: a.rows().max(1) as u64,
            seed: 0,
        })
    }

    pub fn with_max_iterations(mut self, n: u64) -> Self {
        self.max_iterations = n;
        self
    }

    pub fn with_checkpoint_interval(mut self, n: u64) -> Self {
        self.checkpoint_interval = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_z_stepsize(mut self, mode: ZStepsize) -> Self {
        self.z_stepsize = mode;
        self
    }

    pub fn with_partitions(mut self, rows: BlockPartition, cols: BlockPartition) -> Self {
        self.row_partition = rows;
        self.col_partition = cols;
        self
    }
}
