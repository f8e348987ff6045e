//! All randomness goes through SplitMix64 seeded directly from the caller's
//! `u64`, so reports are reproducible bit for bit.

use rand::{Rng as _, SeedableRng};
pub use rand_xoshiro::SplitMix64;

pub fn seeded(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

/// Index drawn from a discrete distribution by inverse CDF.
pub fn categorical(rng: &mut SplitMix64, probs: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    // rounding left a sliver above the last cumulative value
    probs.iter().rposition(|&p| p > 0.).unwrap_or(0)
}
