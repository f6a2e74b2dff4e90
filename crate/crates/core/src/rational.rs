//! Exact rational helpers: construction, parsing, canonical formatting and
//! decimal rendering of `BigRational` values.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number used throughout the crate.
pub type Q = BigRational;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"n"` or a plain decimal such as `"-0.125"`.
pub fn parse_q(text: &str) -> Result<Q> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !int_digits.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac}");
        let mut n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Q::new(n, d));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

/// Canonical lowest-terms rendering: `"p/q"` or `"n"`, sign on the numerator.
pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

/// Nearest `f64`; values below the `f64` range underflow to zero.
pub fn to_f64(x: &Q) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    sign * ln_abs(x).exp()
}

/// Natural logarithm of `|x|`, valid far outside the `f64` range. `x` must be non-zero.
pub fn ln_abs(x: &Q) -> f64 {
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 60;
    let top: BigInt = n.abs() >> shift;
    top.to_f64().unwrap_or(1.0).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `10^e` as a big integer.
fn pow10(e: usize) -> BigInt {
    num_traits::pow(BigInt::from(10), e)
}

/// Decimal rendering with `sig` significant digits, exact up to the final
/// rounding. Moderate magnitudes print positionally, others in `e` notation.
pub fn to_decimal(x: &Q, sig: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let sig = sig.max(1);
    let negative = x.is_negative();
    let num = x.numer().abs();
    let den = x.denom().clone();

    // Estimate the decimal exponent of num/den, then correct it.
    let mut exp = num.to_string().len() as i64 - den.to_string().len() as i64;
    let scaled = loop {
        let shift = sig as i64 - 1 - exp;
        let (n, d) = if shift >= 0 {
            (&num * pow10(shift as usize), den.clone())
        } else {
            (num.clone(), &den * pow10((-shift) as usize))
        };
        let (quot, rem) = n.div_rem(&d);
        if quot >= pow10(sig) {
            exp += 1;
            continue;
        }
        if quot < pow10(sig - 1) {
            exp -= 1;
            continue;
        }
        let mut quot = quot;
        if &rem * 2 >= d {
            quot += BigInt::one();
        }
        if quot == pow10(sig) {
            quot = pow10(sig - 1);
            exp += 1;
        }
        break quot;
    };

    let digits = scaled.to_string();
    let body = if (-6..=15).contains(&exp) {
        positional(&digits, exp)
    } else {
        let (lead, rest) = digits.split_at(1);
        let rest = rest.trim_end_matches('0');
        if rest.is_empty() {
            format!("{lead}e{exp}")
        } else {
            format!("{lead}.{rest}e{exp}")
        }
    };
    if negative && scaled.sign() != Sign::NoSign {
        format!("-{body}")
    } else {
        body
    }
}

fn positional(digits: &str, exp: i64) -> String {
    let point = exp + 1;
    let s = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else if point as usize >= digits.len() {
        format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
    } else {
        let (a, b) = digits.split_at(point as usize);
        format!("{a}.{b}")
    };
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Default decimal rendering used in all CLI output.
pub fn decimal(x: &Q) -> String {
    to_decimal(x, 17)
}

/// `base^exp` for a non-negative exponent.
pub fn pow(base: &Q, exp: usize) -> Q {
    num_traits::pow(base.clone(), exp)
}

/// Least common multiple of all denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Q>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Ceiling of `x`.
pub fn ceil(x: &Q) -> BigInt {
    x.ceil().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_q("1/6").unwrap(), q(1, 6));
        assert_eq!(parse_q("-4/6").unwrap(), q(-2, 3));
        assert_eq!(parse_q("7").unwrap(), qi(7));
        assert_eq!(parse_q("0.125").unwrap(), q(1, 8));
        assert_eq!(parse_q("-1.5").unwrap(), q(-3, 2));
        assert_eq!(parse_q(".5").unwrap(), q(1, 2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
        assert!(parse_q("").is_err());
    }

    #[test]
    fn canonical_format() {
        assert_eq!(fmt_q(&q(2, 4)), "1/2");
        assert_eq!(fmt_q(&q(3, -9)), "-1/3");
        assert_eq!(fmt_q(&qi(0)), "0");
        assert_eq!(fmt_q(&q(-12, 125)), "-12/125");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&q(1, 8), 17), "0.125");
        assert_eq!(to_decimal(&q(1, 3), 5), "0.33333");
        assert_eq!(to_decimal(&q(2, 3), 5), "0.66667");
        assert_eq!(to_decimal(&q(-12, 125), 17), "-0.096");
        assert_eq!(to_decimal(&qi(100), 17), "100");
        assert_eq!(to_decimal(&q(999_999, 1_000_000), 3), "1");
        let tiny = Q::new(BigInt::one(), pow10(470) * 3);
        assert_eq!(to_decimal(&tiny, 4), "3.333e-471");
    }

    #[test]
    fn logarithms_beyond_f64_range() {
        let tiny = Q::new(BigInt::one(), pow10(500));
        let expected = -500.0 * std::f64::consts::LN_10;
        assert!((ln_abs(&tiny) - expected).abs() < 1e-9);
        assert!((to_f64(&q(1, 3)) - 1.0 / 3.0).abs() < 1e-16);
    }
}
