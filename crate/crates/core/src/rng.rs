//! Reproducible random streams.
//!
//! [`RngStream`] is ChaCha8 keyed by a 64-bit seed (expanded with
//! `SeedableRng::seed_from_u64`) and a 64-bit stream id. ChaCha output is
//! platform independent, so equal `(seed, stream)` pairs give equal draws
//! everywhere. Trials use `seed + trial_index`; the generator and the solver
//! of one trial use different stream ids.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream id used for problem generation.
pub const GENERATOR_STREAM: u64 = 0;
/// Stream id used for solver index sampling.
pub const SOLVER_STREAM: u64 = 1;
/// Stream id used by certificate sampling.
pub const CERTIFY_STREAM: u64 = 2;

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, GENERATOR_STREAM)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { seed, stream, inner }
    }

    /// Independent stream for trial `index`: seed `seed + index`, same stream id.
    pub fn substream(&self, index: u64) -> Self {
        Self::with_stream(self.seed.wrapping_add(index), self.stream)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Inverse-CDF sampler over a fixed discrete distribution. Every draw
/// consumes exactly one uniform `f64` from the stream.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexSampler {
    cumulative: Vec<f64>,
}

impl IndexSampler {
    pub fn new(probabilities: &[f64]) -> Self {
        let mut acc = 0.0;
        let cumulative = probabilities
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Self { cumulative }
    }

    pub fn len(&self) -> usize {
        self.cumulative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cumulative.is_empty()
    }

    #[inline]
    pub fn sample(&self, rng: &mut RngStream) -> usize {
        let u = rng.uniform() * self.cumulative.last().copied().unwrap_or(1.0);
        let i = self.cumulative.partition_point(|&c| c <= u);
        i.min(self.cumulative.len() - 1)
    }
}

/// Draws index `i` with probability `p[i]`.
pub fn sample_index(p: &[f64], rng: &mut RngStream) -> usize {
    IndexSampler::new(p).sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_always_zero() {
        let mut rng = RngStream::new(3);
        for _ in 0..100 {
            assert_eq!(sample_index(&[1.0], &mut rng), 0);
        }
    }

    #[test]
    fn identical_seeds_identical_draws() {
        let p = [0.1, 0.2, 0.3, 0.4];
        let mut a = RngStream::new(42);
        let mut b = RngStream::new(42);
        let sa: Vec<usize> = (0..1000).map(|_| sample_index(&p, &mut a)).collect();
        let sb: Vec<usize> = (0..1000).map(|_| sample_index(&p, &mut b)).collect();
        assert_eq!(sa, sb);
        let mut c = RngStream::with_stream(42, SOLVER_STREAM);
        let sc: Vec<usize> = (0..1000).map(|_| sample_index(&p, &mut c)).collect();
        assert_ne!(sa, sc);
    }

    #[test]
    fn fair_coin_within_three_sigma() {
        let n = 100_000;
        let mut rng = RngStream::new(7);
        let ones = (0..n).filter(|_| sample_index(&[0.5, 0.5], &mut rng) == 1).count() as f64;
        let sigma = (n as f64 * 0.25).sqrt();
        assert!((ones - n as f64 / 2.0).abs() <= 3.0 * sigma, "ones = {ones}");
    }

    #[test]
    fn frozen_first_draws() {
        // Pins the generator: changing the algorithm or seeding breaks this.
        let mut rng = RngStream::new(0);
        let first = rng.next_u64();
        let mut again = RngStream::new(0);
        assert_eq!(first, again.next_u64());
        assert_eq!(first, 13080132717333068652);
        assert_eq!(RngStream::new(5).substream(3).seed(), 8);
    }
}
