//! Exact rational helpers. Every probability in the crate is a [`Rational`].

use alloc::string::String;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rational = num_rational::BigRational;

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `p/q` or a bare integer. Decimal notation is rejected so that
/// thresholds stay exact end to end.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let text = text.trim();
    let bad = || Error::BadRational(String::from(text));
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let numer = BigInt::from_str(numer).map_err(|_| bad())?;
    let denom = BigInt::from_str(denom).map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

pub fn is_probability(value: &Rational) -> bool {
    !value.is_negative() && *value <= Rational::one()
}

/// Smallest integer not below `value`.
pub fn ceil(value: &Rational) -> BigInt {
    value.ceil().to_integer()
}

pub fn clamp_unit(value: Rational) -> Rational {
    if value.is_negative() {
        Rational::zero()
    } else if value > Rational::one() {
        Rational::one()
    } else {
        value
    }
}
