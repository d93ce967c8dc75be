//! Reproducible randomness.
//!
//! Every random choice in the crate goes through [`SeededRng`]: ChaCha8
//! seeded with `ChaCha8Rng::seed_from_u64(seed)`. Bounded draws use plain
//! rejection sampling on `next_u64` (reject the top partial block, then
//! reduce modulo the bound), so the mapping from seed to output depends
//! only on the ChaCha8 keystream and not on any library's range-sampling
//! strategy.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct SeededRng(ChaCha8Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Independent stream for the same seed (used for generator retries).
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self(rng)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform integer in `[0, bound)`. `bound` must be positive.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }

    /// Uniform integer in the closed range `[lo, hi]`.
    pub fn range_inclusive(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi, "empty range");
        let span = (hi as i128 - lo as i128 + 1) as u128;
        if span > u64::MAX as u128 {
            return self.next_u64() as i64;
        }
        (lo as i128 + self.below(span as u64) as i128) as i64
    }

    /// Uniform float in `[0, 1)` with 53 random bits.
    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Fisher-Yates, walking from the back: for `i = len-1 .. 1`, swap `i`
/// with `below(i + 1)`.
pub fn shuffle<T>(rng: &mut SeededRng, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        items.swap(i, j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn below_stays_in_range() {
        let mut rng = SeededRng::new(1);
        for bound in 1..50 {
            for _ in 0..20 {
                assert!(rng.below(bound) < bound);
            }
        }
    }

    #[test]
    fn range_inclusive_hits_both_ends() {
        let mut rng = SeededRng::new(2);
        let draws: Vec<i64> = (0..500).map(|_| rng.range_inclusive(-3, 7)).collect();
        assert!(draws.iter().all(|&x| (-3..=7).contains(&x)));
        assert!(draws.contains(&-3) && draws.contains(&7));
    }

    #[test]
    fn streams_differ() {
        let a = SeededRng::with_stream(5, 0).next_u64();
        let b = SeededRng::with_stream(5, 1).next_u64();
        assert_ne!(a, b);
    }

    #[test]
    fn shuffle_is_permutation() {
        let mut rng = SeededRng::new(3);
        let mut v: Vec<u32> = (0..100).collect();
        shuffle(&mut rng, &mut v);
        let mut sorted = v.clone();
        sorted.sort();
        assert_eq!(sorted, (0..100).collect::<Vec<_>>());
    }

    // Pins the keystream-to-output mapping; a change here breaks the
    // reproducibility contract for stored experiment seeds.
    #[test]
    fn frozen_shuffle_output() {
        let mut rng = SeededRng::new(42);
        let mut v: Vec<u32> = (0..8).collect();
        shuffle(&mut rng, &mut v);
        assert_eq!(v, vec![5, 3, 2, 6, 7, 4, 0, 1]);
    }
}
