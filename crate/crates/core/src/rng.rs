//! Seeded random number generation.
//!
//! Reproducibility is a hard requirement here, so both the generator and the
//! Gaussian transform are pinned explicitly rather than delegated to an
//! external crate whose stream might change between versions:
//!
//! - the generator is SplitMix64 (Steele/Lea/Vigna), a 64-bit counter-based
//!   sequence with an avalanche finalizer;
//! - the Gaussian transform is Box-Muller on consecutive output pairs, with
//!   `u1` mapped into `(0, 1]` so the logarithm is always defined.
//!
//! Every function is a pure map from its integer inputs; identical seeds give
//! bit-identical streams on every platform with IEEE-754 doubles.

/// SplitMix64 finalizer. Bijective on `u64`.
#[inline]
pub fn mix64(z: u64) -> u64 {
    let mut z = z;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 sequence generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform in the half-open interval `[0, 1)`, using the top 53 bits.
    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in the half-open interval `(0, 1]`, so `ln` never sees zero.
    #[inline]
    pub fn next_unit_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// One Box-Muller draw: two standard-normal values from two consecutive
    /// uniforms. The pairing is fixed: the first uniform feeds the radius,
    /// the second the angle, and the cosine branch comes first.
    #[inline]
    pub fn next_normal_pair(&mut self) -> (f64, f64) {
        let u1 = self.next_unit_open();
        let u2 = self.next_unit();
        let r = libm::sqrt(-2.0 * libm::log(u1));
        let theta = 2.0 * core::f64::consts::PI * u2;
        (r * libm::cos(theta), r * libm::sin(theta))
    }
}

/// Derives the seed for one `(size, trial)` cell of an experiment from the
/// master seed.
///
/// The two indices are packed into a single word before the bijective
/// finalizer runs, so for a fixed master seed distinct `(size_index,
/// trial_index)` pairs are guaranteed distinct outputs. Because the result
/// depends only on the three inputs, trials can be scheduled in any order
/// (or in parallel) without changing what each one computes.
pub fn derive_trial_seed(master_seed: u64, size_index: u32, trial_index: u32) -> u64 {
    let packed = (size_index as u64) << 32 | trial_index as u64;
    mix64(mix64(master_seed ^ GOLDEN_GAMMA) ^ packed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;
    use std::vec::Vec;

    #[test]
    fn derive_is_pure_and_separates_inputs() {
        assert_eq!(derive_trial_seed(7, 3, 9), derive_trial_seed(7, 3, 9));
        assert_ne!(derive_trial_seed(0, 0, 0), derive_trial_seed(0, 0, 1));
        assert_ne!(derive_trial_seed(0, 0, 0), derive_trial_seed(0, 1, 0));
        assert_ne!(derive_trial_seed(0, 0, 0), derive_trial_seed(1, 0, 0));
    }

    #[test]
    fn derive_has_no_collisions_over_ten_thousand_cells() {
        // Exhaustive check over 100 x 100 (size, trial) pairs under one master
        // seed. The pack-then-mix construction makes this collision-free by
        // construction; the test guards the construction.
        let mut seen = HashSet::new();
        for size_index in 0..100 {
            for trial_index in 0..100 {
                assert!(seen.insert(derive_trial_seed(42, size_index, trial_index)));
            }
        }
        assert_eq!(seen.len(), 10_000);
    }

    #[test]
    fn normal_pairs_have_sane_moments() {
        let mut rng = SplitMix64::new(123);
        let n = 200_000;
        let mut values = Vec::with_capacity(n);
        while values.len() < n {
            let (a, b) = rng.next_normal_pair();
            values.push(a);
            values.push(b);
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "variance {var}");
    }

    #[test]
    fn unit_open_never_returns_zero() {
        let mut rng = SplitMix64::new(0);
        for _ in 0..10_000 {
            let u = rng.next_unit_open();
            assert!(u > 0.0 && u <= 1.0);
        }
    }
}
