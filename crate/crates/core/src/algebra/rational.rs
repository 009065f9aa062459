//! Exact rationals and a few conversions used throughout the crate.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Sign of a rational as -1, 0 or +1.
pub fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

pub fn bigint_sign(r: &BigInt) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Parses `"27"`, `"-5/12"` or a finite decimal such as `"0.125"` into an
/// exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{whole_digits}{frac}");
        let mut n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Some(Rational::new(n, d));
    }
    BigInt::from_str(s).ok().map(Rational::from_integer)
}

/// Canonical text form: `n` for integers, `n/d` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest-ish `f64` of a rational, robust for huge numerators/denominators.
pub fn to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nbits = r.numer().bits() as i64;
    let dbits = r.denom().bits() as i64;
    let shift = nbits.max(dbits) - 60;
    let n = if shift > 0 {
        r.numer() >> shift as usize
    } else {
        r.numer().clone()
    };
    let d = if shift > 0 {
        r.denom() >> shift as usize
    } else {
        r.denom().clone()
    };
    match (n.to_f64(), d.to_f64()) {
        (Some(n), Some(d)) if d != 0.0 => n / d,
        _ => {
            // Either tiny or astronomically large.
            let exp = nbits - dbits;
            let sgn = if r.is_negative() { -1.0 } else { 1.0 };
            sgn * 2f64.powi(exp.clamp(-1100, 1100) as i32)
        }
    }
}

/// Floor of a rational as a big integer.
pub fn floor(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Formats `r` rounded to `digits` decimals (round half away from zero).
pub fn to_decimal_string(r: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = r * Rational::from_integer(scale.clone());
    let half = rat(1, 2);
    let rounded = if scaled.is_negative() {
        -floor(&(-scaled + half))
    } else {
        floor(&(scaled + half))
    };
    let negative = rounded.is_negative();
    let abs = rounded.abs();
    let (whole, frac) = abs.div_rem(&scale);
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{whole}")
    } else {
        format!(
            "{sign}{whole}.{:0>width$}",
            frac.to_string(),
            width = digits
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_fractions_and_decimals() {
        assert_eq!(parse_rational("27"), Some(int(27)));
        assert_eq!(parse_rational("-5/12"), Some(rat(-5, 12)));
        assert_eq!(parse_rational("0.125"), Some(rat(1, 8)));
        assert_eq!(parse_rational("-1.5"), Some(rat(-3, 2)));
        assert_eq!(parse_rational("4/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("1."), None);
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(to_decimal_string(&rat(2, 3), 3), "0.667");
        assert_eq!(to_decimal_string(&rat(-2, 3), 3), "-0.667");
        assert_eq!(to_decimal_string(&int(10), 2), "10.00");
        assert_eq!(to_decimal_string(&rat(-1, 10000), 3), "0.000");
    }

    #[test]
    fn f64_of_huge_rationals() {
        let big = Rational::new(
            num_traits::pow(BigInt::from(10), 400) * 3,
            num_traits::pow(BigInt::from(10), 400),
        );
        assert!((to_f64(&big) - 3.0).abs() < 1e-12);
    }
}
