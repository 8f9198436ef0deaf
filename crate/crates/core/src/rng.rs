//! Seeded randomness.
//!
//! Every stochastic operation takes its random source explicitly. The concrete
//! stream is ChaCha8, whose output is identical on every platform for a given
//! seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// The draws an optimizer needs. Implemented by [`RngStream`] and by scripted
/// sources in tests.
pub trait RandomSource {
    /// Uniform real in `[0, 1)`.
    fn uniform(&mut self) -> f64;

    /// Uniform integer in `0..n`. `n` must be positive.
    fn index(&mut self, n: usize) -> usize;

    /// Standard normal variate.
    fn normal(&mut self) -> f64;

    /// Uniform real in `[lo, hi]`.
    fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        (lo + self.uniform() * (hi - lo)).clamp(lo, hi)
    }
}

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// An independent stream derived from this stream's seed and a tag.
    pub fn derive(&self, tag: u64) -> Self {
        Self::new(mix64(self.seed ^ mix64(tag)))
    }
}

impl RandomSource for RngStream {
    fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    fn index(&mut self, n: usize) -> usize {
        assert!(n > 0, "index range must be non-empty");
        self.inner.random_range(0..n)
    }

    fn normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
