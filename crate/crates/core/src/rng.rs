//! Seedable, splittable random stream.
//!
//! Backed by ChaCha8, a counter-based generator: every `(seed, stream)` pair
//! addresses its own 2^64-block keystream, so substreams handed to parallel
//! workers never overlap. Normal variates come from the ziggurat sampler in
//! `rand_distr::StandardNormal`; both choices are part of the determinism
//! contract and changing either changes every sample stream.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    /// Independent stream `index` under `seed`.
    pub fn substream(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        RandomStream { rng }
    }

    /// `count` independent streams, one per worker.
    pub fn split(seed: u64, count: usize) -> Vec<Self> {
        (0..count as u64)
            .map(|i| Self::substream(seed, i))
            .collect()
    }

    /// Uniform on `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform on `(0, 1]`.
    #[inline]
    pub fn uniform_open0(&mut self) -> f64 {
        1.0 - self.rng.random::<f64>()
    }

    #[inline]
    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }
}
