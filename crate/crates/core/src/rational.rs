//! Exact rational numbers used for ℓ, z and all polynomial coefficients.

use alloc::string::{String, ToString};
use core::str::FromStr;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::Ratio<i128>;

/// Denominator grain for decimals converted to rationals.
pub const DECIMAL_GRAIN: i128 = 1_000_000_000_000;

pub fn rat(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

pub fn int(n: i128) -> Rational {
    Rational::from_integer(n)
}

pub fn to_f64(r: &Rational) -> f64 {
    // Numerators stay far below 2^53 for the supported ℓ range; the float
    // division is exact up to rounding of the quotient.
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) => n / d,
        _ => f64::NAN,
    }
}

/// Parses `"p/q"` or an integer.
pub fn parse_fraction(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidParameter(alloc::format!("cannot parse {s:?} as p/q"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = i128::from_str(n.trim()).map_err(|_| bad())?;
            let d = i128::from_str(d.trim()).map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(rat(n, d))
        }
        None => i128::from_str(s).map(int).map_err(|_| bad()),
    }
}

/// Parses `"p/q"`, an integer, or a decimal such as `0.6`.
///
/// Decimals are read exactly when they have at most twelve fractional
/// digits and are rounded to a 1e-12 grain otherwise.
pub fn parse_decimal_or_fraction(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.contains('/') || !(s.contains('.') || s.contains('e') || s.contains('E')) {
        return parse_fraction(s);
    }
    let bad = || Error::InvalidParameter(alloc::format!("cannot parse {s:?} as a number"));
    if !s.contains('e') && !s.contains('E') {
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (ip, fp) = body.split_once('.').ok_or_else(bad)?;
        if fp.len() <= 12 && ip.len() <= 18 && (ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit())) {
            let digits: String = ip.chars().chain(fp.chars()).collect();
            let n = if digits.is_empty() { 0 } else { i128::from_str(&digits).map_err(|_| bad())? };
            let d = 10i128.pow(fp.len() as u32);
            let r = rat(n, d);
            return Ok(if neg { -r } else { r });
        }
    }
    let value = f64::from_str(s).map_err(|_| bad())?;
    from_f64_grain(value).ok_or_else(bad)
}

/// Rounds a float to the nearest multiple of 1/[`DECIMAL_GRAIN`].
pub fn from_f64_grain(value: f64) -> Option<Rational> {
    if !value.is_finite() || value.abs() > 1e6 {
        return None;
    }
    let scaled = num_traits::Float::round(value * DECIMAL_GRAIN as f64);
    Some(rat(scaled as i128, DECIMAL_GRAIN))
}

/// Prints `p/q`, or `p` when the denominator is one.
pub fn format(r: &Rational) -> String {
    if r.denom() == &1 {
        r.numer().to_string()
    } else {
        alloc::format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_integer(r: &Rational) -> bool {
    *r.denom() == 1
}

pub fn is_zero(r: &Rational) -> bool {
    r.is_zero()
}

pub fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_decimal_or_fraction("0.6").unwrap(), rat(3, 5));
        assert_eq!(parse_decimal_or_fraction("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse_decimal_or_fraction("7/3").unwrap(), rat(7, 3));
        assert_eq!(parse_decimal_or_fraction("2").unwrap(), int(2));
        assert_eq!(parse_decimal_or_fraction("1e-1").unwrap(), rat(1, 10));
    }

    #[test]
    fn fractions_reject_garbage() {
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("abc").is_err());
        assert!(parse_fraction("0.5").is_err());
    }

    #[test]
    fn formatting() {
        assert_eq!(format(&rat(5, 2)), "5/2");
        assert_eq!(format(&int(3)), "3");
        assert_eq!(format(&rat(-1, 4)), "-1/4");
    }
}
