//! Counter-based draws keyed by `(seed, dimension, vertex tuple)`.
//!
//! Each candidate simplex gets one 64-bit uniform that depends only on its
//! key, so inclusion decisions do not depend on generation order and two
//! parameter vectors sharing a seed are monotonically coupled.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function; a bijection on `u64`.
#[inline]
pub const fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform 64-bit draw for the simplex `vertices` of dimension `dim`.
#[inline]
pub fn simplex_draw(seed: u64, dim: usize, vertices: &[u32]) -> u64 {
    let mut h = mix64(seed.wrapping_add(GOLDEN));
    h = mix64(h ^ (dim as u64 + 1).wrapping_mul(GOLDEN));
    for &v in vertices {
        h = mix64(h.wrapping_add(GOLDEN).wrapping_add(u64::from(v)));
    }
    h
}

/// Inclusion rule for one dimension: include iff `draw < t`, so the
/// retention probability is exactly `t / 2^64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Threshold {
    Never,
    Always,
    Below(u64),
}

impl Threshold {
    pub fn from_f64(p: f64) -> Threshold {
        if p.is_nan() || p <= 0.0 {
            Threshold::Never
        } else if p >= 1.0 {
            Threshold::Always
        } else {
            // exact: scaling by 2^64 only shifts the exponent
            Threshold::Below((p * 18_446_744_073_709_551_616.0) as u64)
        }
    }

    pub fn from_rational(p: &BigRational) -> Threshold {
        if p <= &BigRational::zero() {
            Threshold::Never
        } else if p >= &BigRational::one() {
            Threshold::Always
        } else {
            let scaled = p * BigRational::from_integer(BigInt::one() << 64);
            Threshold::Below(scaled.floor().to_integer().to_u64().expect("p < 1"))
        }
    }

    #[inline]
    pub fn accepts(self, draw: u64) -> bool {
        match self {
            Threshold::Never => false,
            Threshold::Always => true,
            Threshold::Below(t) => draw < t,
        }
    }
}
