//! Seeded randomness shared by every stochastic step, so runs are
//! reproducible from a single `u64` seed.

use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for a sub-task, keyed by a small tag.
pub fn derive(seed: u64, tag: u64) -> SeededRng {
    let mixed = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17);
    ChaCha8Rng::seed_from_u64(mixed)
}

/// Uniform integer in `1..=10007` divided by 1009.
pub fn test_rational(rng: &mut impl Rng) -> BigRational {
    crate::poly::ratio(rng.gen_range(1..=10007), 1009)
}
