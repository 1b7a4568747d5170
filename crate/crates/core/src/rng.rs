//! Deterministic, splittable random source.
//!
//! Every ensemble member derives its own single-word seed from the base seed
//! and its replicate index through a SplitMix64 output function, then runs an
//! independent ChaCha8 stream. The derivation is counter-based (O(1) in the
//! index), so replicate k draws the same numbers no matter how many workers
//! run or in which order they are scheduled.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the per-replicate seed for stream `k` of a base seed.
pub fn stream_seed(base: u64, k: u64) -> u64 {
    mix64(base.wrapping_add(k.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Gaussian sampler over a dedicated ChaCha8 stream.
pub struct GaussianStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    /// Stream for replicate `k` of ensemble `base_seed`.
    pub fn new(base_seed: u64, k: u64) -> Self {
        Self::from_seed(stream_seed(base_seed, k))
    }

    /// Stream keyed directly by a single-word seed.
    pub fn from_seed(seed: u64) -> Self {
        GaussianStream {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform draw in [0, 1) with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal draw (Marsaglia polar method, spare value cached).
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let m = libm::sqrt(-2.0 * libm::log(s) / s);
                self.spare = Some(v * m);
                return u * m;
            }
        }
    }

    /// Fills `out` with standard normal draws.
    pub fn fill_normal(&mut self, out: &mut [f64]) {
        for x in out.iter_mut() {
            *x = self.normal();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let mut a = GaussianStream::new(42, 0);
        let mut b = GaussianStream::new(42, 0);
        let mut c = GaussianStream::new(42, 1);
        let xa: f64 = a.normal();
        assert_eq!(xa, b.normal());
        assert_ne!(xa, c.normal());
    }

    #[test]
    fn stream_seed_is_counter_based() {
        // Same (base, k) always maps to the same seed, independent of any
        // previously derived streams.
        let s = stream_seed(7, 1000);
        for k in 0..5 {
            let _ = stream_seed(7, k);
        }
        assert_eq!(s, stream_seed(7, 1000));
    }

    #[test]
    fn normal_moments_are_sane() {
        let mut g = GaussianStream::new(1, 0);
        let m = 200_000;
        let mut xs = vec![0.0; m];
        g.fill_normal(&mut xs);
        let mean: f64 = xs.iter().sum::<f64>() / m as f64;
        let var: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1) as f64;
        assert!(mean.abs() < 4.0 / (m as f64).sqrt(), "mean = {mean}");
        assert!((var - 1.0).abs() < 0.02, "var = {var}");
    }
}
