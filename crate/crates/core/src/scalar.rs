//! Scalar backends.
//!
//! Two implementations sit behind [`Scalar`]: exact arbitrary-precision
//! rationals ([`Rational`]) and binary `f64`. Identities are checked on
//! rationals; zero-finding runs on floats. Mixing backends is a type error.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. Always normalized: gcd 1, positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Rational,
    Float64,
}

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    const BACKEND: Backend;

    fn from_i64(v: i64) -> Self;

    /// Parses `"p/q"` or an integer string. A zero denominator is rejected.
    fn parse(s: &str) -> Result<Self>;

    fn to_f64(&self) -> f64;

    /// Canonical text form used by every wire format.
    fn to_text(&self) -> String {
        self.to_string()
    }

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }
}

/// Shorthand for integer rationals.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Shorthand for `p/q`. Panics on `q == 0`; meant for literals.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

fn split_fraction(s: &str) -> Result<(&str, Option<&str>)> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse(s.to_string()));
    }
    Ok(match s.split_once('/') {
        Some((p, q)) => (p.trim(), Some(q.trim())),
        None => (s, None),
    })
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Rational;

    fn from_i64(v: i64) -> Self {
        int(v)
    }

    fn parse(s: &str) -> Result<Self> {
        let (p, q) = split_fraction(s)?;
        let num = BigInt::from_str(p).map_err(|_| Error::Parse(s.to_string()))?;
        let den = match q {
            Some(q) => BigInt::from_str(q).map_err(|_| Error::Parse(s.to_string()))?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(Error::ZeroDenominatorLiteral(s.to_string()));
        }
        Ok(Rational::new(num, den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float64;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn parse(s: &str) -> Result<Self> {
        let (p, q) = split_fraction(s)?;
        let num: f64 = p.parse().map_err(|_| Error::Parse(s.to_string()))?;
        let den: f64 = match q {
            Some(q) => q.parse().map_err(|_| Error::Parse(s.to_string()))?,
            None => 1.0,
        };
        if den == 0.0 {
            return Err(Error::ZeroDenominatorLiteral(s.to_string()));
        }
        Ok(num / den)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Converts a rational value into another backend.
pub fn convert<S: Scalar>(q: &Rational) -> S {
    match S::BACKEND {
        Backend::Rational => S::parse(&q.to_string()).expect("rational text round-trips"),
        Backend::Float64 => S::parse(&format!("{:e}", Scalar::to_f64(q)))
            .expect("float text round-trips"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(Rational::parse("3/6").unwrap(), rat(1, 2));
        assert_eq!(Rational::parse("-8").unwrap(), int(-8));
        assert_eq!(Rational::parse("4/-6").unwrap(), rat(-2, 3));
        assert_eq!(f64::parse("1/4").unwrap(), 0.25);
    }

    #[test]
    fn rejects_zero_denominator() {
        assert!(matches!(
            Rational::parse("1/0"),
            Err(Error::ZeroDenominatorLiteral(_))
        ));
        assert!(matches!(
            f64::parse("2/0"),
            Err(Error::ZeroDenominatorLiteral(_))
        ));
        assert!(matches!(Rational::parse("x"), Err(Error::Parse(_))));
        assert!(matches!(Rational::parse(""), Err(Error::Parse(_))));
    }

    #[test]
    fn rationals_are_normalized() {
        let q = Rational::parse("-6/-4").unwrap();
        assert_eq!(q.numer(), &BigInt::from(3));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert_eq!(q.to_text(), "3/2");
    }

    #[test]
    fn sum_is_exact_by_two_routes() {
        // a/b + c/d directly and over the common multiple b·d
        let (a, b, c, d) = (7i64, 12i64, -5i64, 18i64);
        let direct = rat(a, b) + rat(c, d);
        let common = rat(a * d + c * b, b * d);
        assert_eq!(direct, common);
        assert_eq!(direct, rat(11, 36));
    }

    #[test]
    fn conversion_to_float() {
        let x: f64 = convert(&rat(1, 3));
        assert!((x - 1.0 / 3.0).abs() < 1e-16);
        let y: Rational = convert(&rat(5, 7));
        assert_eq!(y, rat(5, 7));
    }
}
