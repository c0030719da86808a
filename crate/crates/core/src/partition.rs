//! Row and column block partitions with cached block norms and sampling
//! probabilities.

use crate::error::{Error, Result};
use crate::linalg::spectral_norm;
use crate::matrix::{norm2_sq, DenseMatrix};
use crate::rng::{IndexSampler, RngStream};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Row,
    Column,
}

/// How block probabilities are assigned.
#[derive(Debug, Clone, PartialEq)]
pub enum Probabilities {
    Uniform,
    /// `p_i = ||A_i||^2 / sum_j ||A_j||^2`.
    ProportionalToNorm,
    Custom(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockPartition {
    kind: BlockKind,
    blocks: Vec<Vec<usize>>,
    block_sq_norms: Vec<f64>,
    probabilities: Vec<f64>,
    sampler: IndexSampler,
}

impl BlockPartition {
    /// General constructor. Blocks are index sets; they must be nonempty,
    /// disjoint, and cover `0..rows` (row kind) or `0..cols` (column kind).
    pub fn new<T: Scalar>(
        kind: BlockKind,
        a: &DenseMatrix<T>,
        blocks: Vec<Vec<usize>>,
        probabilities: Probabilities,
    ) -> Result<Self> {
        let dim = match kind {
            BlockKind::Row => a.rows(),
            BlockKind::Column => a.cols(),
        };
        validate_cover(&blocks, dim)?;

        let mut block_sq_norms = Vec::with_capacity(blocks.len());
        for (index, idx) in blocks.iter().enumerate() {
            let sq = block_sq_norm(kind, a, idx);
            if !(sq > 0.0) {
                return Err(Error::ZeroBlock { index });
            }
            block_sq_norms.push(sq);
        }

        let probabilities = match probabilities {
            Probabilities::Uniform => vec![1.0 / blocks.len() as f64; blocks.len()],
            Probabilities::ProportionalToNorm => {
                let total: f64 = block_sq_norms.iter().sum();
                block_sq_norms.iter().map(|s| s / total).collect()
            }
            Probabilities::Custom(p) => p,
        };
        validate_probabilities(&probabilities, blocks.len())?;
        let sampler = IndexSampler::new(&probabilities);

        Ok(Self {
            kind,
            blocks,
            block_sq_norms,
            probabilities,
            sampler,
        })
    }

    /// One block per row (or column) with uniform probabilities.
    pub fn singletons<T: Scalar>(kind: BlockKind, a: &DenseMatrix<T>) -> Result<Self> {
        let dim = match kind {
            BlockKind::Row => a.rows(),
            BlockKind::Column => a.cols(),
        };
        Self::new(kind, a, (0..dim).map(|i| vec![i]).collect(), Probabilities::Uniform)
    }

    /// Consecutive blocks of the given sizes.
    pub fn contiguous<T: Scalar>(
        kind: BlockKind,
        a: &DenseMatrix<T>,
        sizes: &[usize],
        probabilities: Probabilities,
    ) -> Result<Self> {
        let mut start = 0;
        let blocks = sizes
            .iter()
            .map(|&s| {
                let b = (start..start + s).collect();
                start += s;
                b
            })
            .collect();
        Self::new(kind, a, blocks, probabilities)
    }

    pub fn kind(&self) -> BlockKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    /// Cached `||A_i||^2` (spectral norm).
    pub fn block_sq_norm(&self, i: usize) -> f64 {
        self.block_sq_norms[i]
    }

    pub fn block_sq_norms(&self) -> &[f64] {
        &self.block_sq_norms
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Total number of indices covered.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    #[inline]
    pub fn sample(&self, rng: &mut RngStream) -> usize {
        self.sampler.sample(rng)
    }
}

/// Blocks `{i, half + i}` for `i < half`, the pairing of real and imaginary
/// coordinates in the real embedding of a complex system.
pub fn paired_blocks(half: usize) -> Vec<Vec<usize>> {
    (0..half).map(|i| vec![i, half + i]).collect()
}

fn block_sq_norm<T: Scalar>(kind: BlockKind, a: &DenseMatrix<T>, idx: &[usize]) -> f64 {
    match (kind, idx) {
        (BlockKind::Row, [i]) => norm2_sq(a.row(*i)),
        (BlockKind::Column, [j]) => (0..a.rows()).map(|i| a.get(i, *j).abs2()).sum(),
        (BlockKind::Row, _) => spectral_norm(&a.select_rows(idx)).powi(2),
        (BlockKind::Column, _) => spectral_norm(&a.select_columns(idx)).powi(2),
    }
}

fn validate_cover(blocks: &[Vec<usize>], dim: usize) -> Result<()> {
    if blocks.is_empty() {
        return Err(Error::InvalidPartition("no blocks".into()));
    }
    let mut seen = vec![false; dim];
    for (b, idx) in blocks.iter().enumerate() {
        if idx.is_empty() {
            return Err(Error::InvalidPartition(format!("block {b} is empty")));
        }
        for &i in idx {
            if i >= dim {
                return Err(Error::InvalidPartition(format!(
                    "index {i} in block {b} is out of range 0..{dim}"
                )));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPartition(format!("index {i} appears twice")));
            }
        }
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidPartition(format!("index {missing} is not covered")));
    }
    Ok(())
}

fn validate_probabilities(p: &[f64], n: usize) -> Result<()> {
    if p.len() != n {
        return Err(Error::InvalidProbabilities(format!(
            "{} probabilities for {n} blocks",
            p.len()
        )));
    }
    if let Some(bad) = p.iter().find(|&&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::InvalidProbabilities(format!(
            "probability {bad} is not strictly positive"
        )));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidProbabilities(format!("sum is {sum}, not 1")));
    }
    Ok(())
}
