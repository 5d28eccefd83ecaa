//! Numeric plumbing: the exact rational type, the [`Scalar`] abstraction that
//! lets the schedulers run over exact rationals or binary floats, and text
//! conversions for fractions and decimals.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

/// Number type a scheduler runs over.
///
/// `Rational` is the exact mode; every invariant check is meaningful there.
/// `f64` is a fast mode for large benchmarks. Threshold comparisons such as
/// `p <= (alpha - 1) * L` can round the wrong way in float mode, so
/// invariant failures there are recorded rather than treated as fatal.
pub trait Scalar:
    Clone
    + PartialOrd
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + SubAssign
    + Zero
{
    const EXACT: bool;

    fn from_ratio(r: &Rational) -> Self;
    fn from_int(n: i64) -> Self;
    fn to_ratio(&self) -> Rational;
    fn as_f64(&self) -> f64;

    fn from_usize(n: usize) -> Self {
        Self::from_int(n as i64)
    }

    fn is_neg(&self) -> bool {
        *self < Self::zero()
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(r: &Rational) -> Self {
        r.clone()
    }

    fn from_int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn to_ratio(&self) -> Rational {
        self.clone()
    }

    fn as_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(r: &Rational) -> Self {
        ratio_to_f64(r)
    }

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn to_ratio(&self) -> Rational {
        Rational::from_float(*self).unwrap_or_else(Rational::zero)
    }

    fn as_f64(&self) -> f64 {
        *self
    }
}

/// Larger of two partially ordered values (the first one on ties or NaN).
pub fn max_of<S: PartialOrd>(a: S, b: S) -> S {
    if b > a {
        b
    } else {
        a
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ceil_to_int(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

pub fn floor_to_int(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

pub fn ratio_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parse an exact rational from `a/b`, an integer, or a plain decimal such as
/// `-0.125` or `3.`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("not a number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::InvalidArgument(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let r = Rational::new(num, den);
    Ok(if neg { -r } else { r })
}

/// `num/den` form, used wherever a value must round-trip exactly.
pub fn fmt_fraction(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Integer form for whole numbers, `num/den` otherwise.
pub fn fmt_compact(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        fmt_fraction(r)
    }
}

/// Decimal rendering rounded to `sig` significant digits (round half up).
pub fn fmt_decimal(r: &Rational, sig: usize) -> String {
    let sig = sig.max(1);
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    // exponent e with 10^e <= a < 10^(e+1)
    let mut e: i64 = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let ten = int(10);
    let pow10 = |k: i64| -> Rational {
        if k >= 0 {
            num_traits::pow(ten.clone(), k as usize)
        } else {
            num_traits::pow(ten.clone(), (-k) as usize).recip()
        }
    };
    while a >= pow10(e + 1) {
        e += 1;
    }
    while a < pow10(e) {
        e -= 1;
    }
    let shift = sig as i64 - 1 - e;
    let scaled = &a * pow10(shift);
    let mut digits = (scaled + rat(1, 2)).floor().to_integer();
    // rounding may carry into an extra digit
    let mut shift = shift;
    if digits.to_string().len() > sig {
        digits = digits.div_floor(&BigInt::from(10));
        shift -= 1;
    }
    let s = digits.to_string();
    let body = if shift <= 0 {
        format!("{s}{}", "0".repeat((-shift) as usize))
    } else if (shift as usize) < s.len() {
        let cut = s.len() - shift as usize;
        format!("{}.{}", &s[..cut], &s[cut..])
    } else {
        format!("0.{}{s}", "0".repeat(shift as usize - s.len()))
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Serde adapter writing a rational as a `num/den` string.
pub mod fraction_str {
    use super::{fmt_fraction, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_fraction(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(
            r: &Option<Rational>,
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&fmt_fraction(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Option<Rational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
                .transpose()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational(" 6/8 ").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1e3").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(fmt_decimal(&rat(15, 11), 5), "1.3636");
        assert_eq!(fmt_decimal(&rat(11, 8), 4), "1.375");
        assert_eq!(fmt_decimal(&rat(11, 8), 3), "1.38");
        assert_eq!(fmt_decimal(&rat(999, 1000), 2), "1.0");
        assert_eq!(fmt_decimal(&int(1500), 2), "1500");
        assert_eq!(fmt_decimal(&rat(1, 800), 2), "0.0013");
        assert_eq!(fmt_decimal(&rat(-1, 3), 3), "-0.333");
    }

    #[test]
    fn fraction_forms() {
        assert_eq!(fmt_fraction(&int(2)), "2/1");
        assert_eq!(fmt_compact(&int(2)), "2");
        assert_eq!(fmt_compact(&rat(4, 6)), "2/3");
    }
}
