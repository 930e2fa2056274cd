//! Exact binomials and log-space helpers shared by the closed-form modules.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// `C(n, k)` as an exact big integer; zero when `k > n`.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` in `u64`, or `None` on overflow.
pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc as u64)
}

/// Binomial with the convention `C(k, i) = 0` for `i > k` or negative arguments.
pub fn binomial_i64(n: i64, k: i64) -> i64 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    binomial_u64(n as u64, k as u64).expect("binomial overflow") as i64
}

/// Binomial as `f64` for the small arguments used by phase functions.
pub fn binomial_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    match binomial_u64(n as u64, k as u64) {
        Some(v) => v as f64,
        None => ln_biguint(&binomial_big(n as u64, k as u64)).exp(),
    }
}

/// Natural log of a positive big integer; `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite for < 1000 bits").ln();
    }
    // keep the top 64 bits and account for the shift
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln C(n, k)` computed from the exact binomial.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    ln_biguint(&binomial_big(n, k))
}

/// Converts an exact rational to `f64`, going through logs for huge values.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() && (v != 0.0 || x.is_zero()) {
            return v;
        }
    }
    let sign = if x.numer() < &BigInt::zero() { -1.0 } else { 1.0 };
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    sign * (ln_biguint(num) - ln_biguint(den)).exp()
}

/// `base^exp` for a rational base and non-negative exponent, with `0^0 = 1`.
pub fn rational_pow(base: &BigRational, exp: u64) -> BigRational {
    if exp == 0 {
        return BigRational::one();
    }
    num_traits::pow::pow(base.clone(), exp as usize)
}

/// Ordinary factorial as `f64`.
pub fn factorial_f64(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Relative difference `|a − b| / max(|a|, |b|, tiny)`.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    (a - b).abs() / scale
}
