//! Exact rational scalars and the small integer helpers shared by every module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Q = BigRational;

/// Builds `num/den` as an exact rational.
///
/// # Panics
/// Panics if `den == 0`.
#[must_use]
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// The integer `v` as a rational.
#[must_use]
pub fn qi(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Formats as `num/den`, including integers (`3/1`).
#[must_use]
pub fn fmt_q(v: &Q) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: `{s}`"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(a, b))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Floating-point value of an exact rational; accurate for huge numerators and denominators.
#[must_use]
pub fn to_f64(v: &Q) -> f64 {
    if let Some(x) = v.to_f64() {
        if x.is_finite() && (x != 0.0 || v.is_zero()) {
            return x;
        }
    }
    // Fall back to scaling by powers of two when the direct conversion under/overflows.
    let nb = v.numer().bits() as i64;
    let db = v.denom().bits() as i64;
    let shift = nb - db - 60;
    let scaled = if shift > 0 {
        Q::new(v.numer().clone(), v.denom() << (shift as usize))
    } else {
        Q::new(v.numer() << ((-shift) as usize), v.denom().clone())
    };
    let m = scaled.to_f64().unwrap_or(0.0);
    m * 2f64.powi(shift as i32)
}

/// Binomial coefficient with the convention `C(k1, k2) = 0` when `k1 < k2` or `k2 < 0`.
#[must_use]
pub fn binomial(k1: i64, k2: i64) -> BigInt {
    if k2 < 0 || k1 < k2 {
        return BigInt::zero();
    }
    let k2 = k2.min(k1 - k2);
    let mut acc = BigInt::one();
    for j in 0..k2 {
        acc *= k1 - j;
        acc /= j + 1;
    }
    acc
}

/// `n!` for `n >= 0`.
#[must_use]
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Sign of a rational as -1, 0 or 1.
#[must_use]
pub fn sign(v: &Q) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_convention() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 5), BigInt::zero());
        assert_eq!(binomial(-2, 3), BigInt::zero());
        assert_eq!(binomial(4, -1), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn parse_round_trip() {
        let v = q(-6, 8);
        assert_eq!(fmt_q(&v), "-3/4");
        assert_eq!(parse_q("-3/4").unwrap(), v);
        assert_eq!(parse_q("7").unwrap(), qi(7));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn f64_of_huge_ratio() {
        let big = Q::new(factorial(300) + 1u32, factorial(300) * 4u32);
        assert!((to_f64(&big) - 0.25).abs() < 1e-12);
        let tiny = Q::new(BigInt::one(), factorial(150));
        assert!(to_f64(&tiny) > 0.0);
    }
}
