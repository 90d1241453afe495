//! Exact rationals in lowest terms, backed by `num-rational`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p"` or `"p/q"` with an optional leading `-`. Whitespace anywhere is ignored.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::BadRational(text.to_string());
    let (negative, body) = match compact.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, compact.as_str()),
    };
    let digits = |s: &str| -> Result<BigInt> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse::<BigInt>().map_err(|_| bad())
    };
    let (num, den) = match body.split_once('/') {
        Some((p, q)) => (digits(p)?, digits(q)?),
        None => (digits(body)?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(Error::ZeroDenominator(text.to_string()));
    }
    let value = Rational::new(num, den);
    Ok(if negative { -value } else { value })
}

/// Lowest-terms text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // numerator or denominator beyond f64 range: scale down both
        let shift = value.numer().bits().max(value.denom().bits()).saturating_sub(1000);
        let n = (value.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (value.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Accepts everything [`parse_rational`] does plus plain decimals such as `-2.41`,
/// converted exactly (`-241/100`).
pub fn parse_decimal(text: &str) -> Result<Rational> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let Some((whole, frac)) = compact.split_once('.') else {
        return parse_rational(text);
    };
    if whole.contains('/') || frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::BadRational(text.to_string()));
    }
    let negative = whole.starts_with('-');
    let whole = match whole.trim_start_matches('-') {
        "" => Rational::zero(),
        w => parse_rational(w)?,
    };
    let scale = BigInt::from(10u32).pow(frac.len() as u32);
    let frac = Rational::new(frac.parse::<BigInt>().map_err(|_| Error::BadRational(text.to_string()))?, scale);
    let value = whole + frac;
    Ok(if negative { -value } else { value })
}
