//! Reproducible random number streams.
//!
//! Every sampler in the crate draws from an [`RngState`]: a ChaCha8 stream
//! addressed by a `(seed, stream_id)` pair. The same pair always reproduces
//! the same variate sequence, and distinct stream ids give statistically
//! independent streams from one seed, so batch experiments can fan out over
//! `stream_id` and still be reproducible regardless of scheduling.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A seeded, stream-addressed random number generator.
#[derive(Debug, Clone)]
pub struct RngState {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngState {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut key = [0u8; 32];
        let mut x = seed;
        for chunk in key.chunks_exact_mut(8) {
            x = splitmix64(x);
            chunk.copy_from_slice(&x.to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(stream_id.into());
        RngState {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// A fresh, independent stream derived from the same seed.
    pub fn substream(&self, id: u64) -> Self {
        RngState::new(self.seed, splitmix64(self.stream_id ^ id.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
    }

    /// Uniform variate on the open interval (0, 1).
    pub fn open01(&mut self) -> f64 {
        // 53 random bits, shifted off zero.
        loop {
            let u = (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            if u > 0.0 && u < 1.0 {
                return u;
            }
        }
    }

    /// Standard exponential variate.
    pub fn exp1(&mut self) -> f64 {
        -self.open01().ln()
    }
}

impl RngCore for RngState {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
}

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
