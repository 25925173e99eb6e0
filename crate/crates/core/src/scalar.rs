//! Exact scalars: rationals, extended lengths and extended function values.
//!
//! Everything in this crate is exact. Lengths live in `ℚ₊ ∪ {∞}` and function
//! values in `ℚ ∪ {±∞}`; arithmetic with the infinite symbols saturates.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Arbitrary precision rational, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

/// Builds the rational `n / d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer rational `n`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let bad = || Error::MalformedRational(s.to_string());
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Canonical text form: `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Converts an integral rational to `i64`.
pub fn to_i64(q: &Rational) -> Option<i64> {
    if !q.is_integer() {
        return None;
    }
    i64::try_from(q.numer()).ok()
}

/// Edge length: a positive rational or `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Length {
    Finite(Rational),
    Infinite,
}

impl Length {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Length::Finite(q) => Some(q),
            Length::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Length::Infinite)
    }

    pub fn zero() -> Self {
        Length::Finite(Rational::zero())
    }

    pub fn min(self, other: Length) -> Length {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// Multiplies by a positive integer.
    pub fn scale(&self, k: i64) -> Length {
        match self {
            Length::Finite(q) => Length::Finite(q * int(k)),
            Length::Infinite => Length::Infinite,
        }
    }

    pub fn parse(s: &str) -> Result<Length, Error> {
        if s.trim() == "inf" {
            Ok(Length::Infinite)
        } else {
            parse_rational(s).map(Length::Finite)
        }
    }
}

impl From<Rational> for Length {
    fn from(q: Rational) -> Self {
        Length::Finite(q)
    }
}

impl PartialOrd for Length {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Length {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Length::Finite(a), Length::Finite(b)) => a.cmp(b),
            (Length::Finite(_), Length::Infinite) => Ordering::Less,
            (Length::Infinite, Length::Finite(_)) => Ordering::Greater,
            (Length::Infinite, Length::Infinite) => Ordering::Equal,
        }
    }
}

impl Add for &Length {
    type Output = Length;
    fn add(self, rhs: &Length) -> Length {
        match (self, rhs) {
            (Length::Finite(a), Length::Finite(b)) => Length::Finite(a + b),
            _ => Length::Infinite,
        }
    }
}

impl Add<&Rational> for &Length {
    type Output = Length;
    fn add(self, rhs: &Rational) -> Length {
        match self {
            Length::Finite(a) => Length::Finite(a + rhs),
            Length::Infinite => Length::Infinite,
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(q) => f.write_str(&format_rational(q)),
            Length::Infinite => f.write_str("inf"),
        }
    }
}

/// A value of a rational function: a rational or one of `±∞`.
///
/// The derived order is the natural one, `-∞ < q < +∞`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Value {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Value::Finite(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Value::Finite(_))
    }

    pub fn zero() -> Self {
        Value::Finite(Rational::zero())
    }

    /// Adds a finite constant; infinite values are unchanged.
    pub fn shift(&self, c: &Rational) -> Value {
        match self {
            Value::Finite(q) => Value::Finite(q + c),
            v => v.clone(),
        }
    }

    /// Multiplies by an integer. `0 · ±∞` is not defined and panics.
    pub fn times(&self, k: i64) -> Value {
        match self {
            Value::Finite(q) => Value::Finite(q * int(k)),
            Value::PosInf if k > 0 => Value::PosInf,
            Value::PosInf if k < 0 => Value::NegInf,
            Value::NegInf if k > 0 => Value::NegInf,
            Value::NegInf if k < 0 => Value::PosInf,
            _ => panic!("zero times an infinite value"),
        }
    }

    /// The value at the end of an unbounded ray of integer slope `slope`.
    pub fn at_infinity(last: &Rational, slope: i64) -> Value {
        match slope.signum() {
            1 => Value::PosInf,
            -1 => Value::NegInf,
            _ => Value::Finite(last.clone()),
        }
    }

    pub fn parse(s: &str) -> Result<Value, Error> {
        match s.trim() {
            "+inf" | "inf" => Ok(Value::PosInf),
            "-inf" => Ok(Value::NegInf),
            other => parse_rational(other).map(Value::Finite),
        }
    }
}

impl From<Rational> for Value {
    fn from(q: Rational) -> Self {
        Value::Finite(q)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(q) => f.write_str(&format_rational(q)),
            Value::PosInf => f.write_str("+inf"),
            Value::NegInf => f.write_str("-inf"),
        }
    }
}

/// Least common multiple of positive integers.
pub fn lcm(values: impl IntoIterator<Item = i64>) -> i64 {
    values
        .into_iter()
        .fold(1, |acc, v| num_integer::lcm(acc, v.abs().max(1)))
}

/// `floor(q)` as an integer rational.
pub fn floor(q: &Rational) -> Rational {
    q.floor()
}

pub fn is_positive(q: &Rational) -> bool {
    q.is_positive()
}

pub fn one() -> Rational {
    Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_parse_in_lowest_terms() {
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(format_rational(&rat(4, 2)), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn infinity_saturates() {
        let a = Length::Finite(int(2));
        assert_eq!(&a + &Length::Infinite, Length::Infinite);
        assert_eq!(a.clone().min(Length::Infinite), a);
        assert!(Length::Infinite > Length::Finite(int(1_000_000)));
        assert!(Value::NegInf < Value::Finite(int(-5)));
        assert_eq!(Value::PosInf.times(-2), Value::NegInf);
        assert_eq!(Value::at_infinity(&int(3), 0), Value::Finite(int(3)));
    }
}
