//! The per-run random stream.
//!
//! Every stochastic draw of a run goes through one [`RandomStream`]. The
//! generator is xoshiro256** (Blackman & Vigna), with its 256-bit state
//! expanded from the 64-bit run seed by SplitMix64. Uniform reals take the
//! top 53 bits of a 64-bit output, so `uniform()` lies in `[0, 1)`.
//! Bounded integers use Lemire's multiply-and-reject method, so they are
//! unbiased and consume a variable (but seed-determined) number of outputs.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

const F64_UNIT: f64 = 1.0 / (1u64 << 53) as f64;

#[derive(Clone, Debug)]
pub struct RandomStream {
    seed: u64,
    inner: Xoshiro256StarStar,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: Xoshiro256StarStar::seed_from_u64(seed),
        }
    }

    /// Seed this stream was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * F64_UNIT
    }

    /// Uniform draw in `[low, high)`.
    pub fn uniform_in(&mut self, low: f64, high: f64) -> f64 {
        low + (high - low) * self.uniform()
    }

    /// Uniform integer in `0..bound`. `bound` must be nonzero.
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "below() needs a nonzero bound");
        let range = bound as u64;
        let threshold = range.wrapping_neg() % range;
        loop {
            let wide = self.next_u64() as u128 * range as u128;
            if (wide as u64) >= threshold {
                return (wide >> 64) as usize;
            }
        }
    }

    /// Fisher-Yates shuffle, last position first.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }

    /// A uniformly random permutation of `0..n`.
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..n).collect();
        self.shuffle(&mut perm);
        perm
    }
}
