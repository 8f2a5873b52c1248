//! Exact rational helpers.
//!
//! Every score and characteristic-function value is a [`Rational`] in
//! canonical reduced form with a positive denominator. Decimal renderings are
//! for display only.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p/q"` or `"p"`.
pub fn parse(text: &str) -> Result<Rational> {
    Rational::from_str(text.trim())
        .map_err(|_| Error::Document(format!("not a rational: `{text}`")))
}

/// Canonical string form: `p/q`, or `p` when the denominator is one.
pub fn to_string(r: &Rational) -> String {
    r.to_string()
}

/// Serializes a rational as its exact `p/q` string.
pub fn serialize<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&to_string(r))
}

/// Serializes a list of rationals as exact strings.
pub fn serialize_all<S: serde::Serializer>(
    values: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(values.iter().map(to_string))
}

/// Decimal rendering with `places` digits, rounding half to even.
pub fn to_decimal(r: &Rational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = r * Rational::from_integer(scale.clone());
    let (q, rem) = scaled.numer().div_mod_floor(scaled.denom());
    let twice: BigInt = &rem * 2;
    let rounded = match twice.cmp(scaled.denom()) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1
            }
        }
    };
    let negative = rounded.is_negative();
    let digits = rounded.abs().to_string();
    let places = places as usize;
    let padded = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (whole, fractional) = padded.split_at(padded.len() - places);
    let sign = if negative { "-" } else { "" };
    if places == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{fractional}")
    }
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

pub fn pow2(e: u32) -> BigInt {
    BigInt::one() << e as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        assert_eq!(to_string(&frac(10, 24)), "5/12");
        assert_eq!(to_string(&frac(4, -2)), "-2");
        assert_eq!(parse("17/66").unwrap(), frac(17, 66));
        assert_eq!(parse(" 3 ").unwrap(), int(3));
        assert!(parse("x/2").is_err());
    }

    #[test]
    fn decimal_half_even() {
        assert_eq!(to_decimal(&frac(5, 12), 6), "0.416667");
        assert_eq!(to_decimal(&frac(1, 8), 2), "0.12");
        assert_eq!(to_decimal(&frac(3, 8), 2), "0.38");
        assert_eq!(to_decimal(&frac(-1, 3), 3), "-0.333");
        assert_eq!(to_decimal(&int(5), 2), "5.00");
        assert_eq!(to_decimal(&frac(1, 2_000_000), 6), "0.000000");
        assert_eq!(to_decimal(&frac(3, 2_000_000), 6), "0.000002");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(3, 0), BigInt::from(1));
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 3), BigInt::from(0));
    }
}
