//! Seeded rational sampling.
//!
//! Coordinates are `num/den` with `num` uniform in `[-num_bound, num_bound]`
//! and `den` uniform in `[1, den_bound]`. Every generator in the crate uses
//! ChaCha8 seeded from a `u64`, so outputs are reproducible.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kernel::{Point, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RationalSampler {
    pub num_bound: i64,
    pub den_bound: i64,
}

impl Default for RationalSampler {
    fn default() -> Self {
        Self {
            num_bound: 24,
            den_bound: 5,
        }
    }
}

impl RationalSampler {
    pub fn rational(&self, rng: &mut impl Rng) -> Rational {
        let num = rng.random_range(-self.num_bound..=self.num_bound);
        let den = rng.random_range(1..=self.den_bound.max(1));
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn vector(&self, rng: &mut impl Rng, d: usize) -> Vec<Rational> {
        (0..d).map(|_| self.rational(rng)).collect()
    }

    pub fn point(&self, rng: &mut impl Rng, d: usize) -> Point {
        Point::new(self.vector(rng, d))
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream seed from a base seed and row parameters.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    // splitmix64 over the parts
    let mut x = base;
    for &p in parts {
        x = x.wrapping_add(p).wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = x;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        x = z ^ (z >> 31);
    }
    x
}
