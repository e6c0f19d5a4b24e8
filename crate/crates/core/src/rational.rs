//! Exact rational arithmetic and the few counting functions the constants need.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Arbitrary precision rational, always kept in lowest terms.
pub type ExactRational = BigRational;

pub fn ratio(numer: u64, denom: u64) -> ExactRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn zero() -> ExactRational {
    BigRational::zero()
}

pub fn one() -> ExactRational {
    BigRational::one()
}

/// Formats as `p/q`, including `1/1` and `0/1`.
pub fn fraction(value: &ExactRational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Shortest decimal that round-trips through `f64`.
pub fn decimal(value: &ExactRational) -> String {
    match value.to_f64() {
        Some(f) => format!("{f}"),
        None => "nan".to_string(),
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Number of injective sequences of length `l` over `k` symbols, `C(k,l)·l!`.
pub fn falling_factorial(k: u64, l: u64) -> BigInt {
    if l > k {
        return BigInt::zero();
    }
    ((k - l + 1)..=k).fold(BigInt::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}
