//! Scalar abstraction for the moment recursions.
//!
//! The recursions only need field operations and small rational constants, so
//! they run unchanged over exact rationals (the reference path) and over
//! `f64`/`f32` (the fast, clearly approximate path).

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

pub trait Field: Num + Clone + Debug + Neg<Output = Self> {
    /// The value `p / q`.
    fn from_ratio(p: i64, q: i64) -> Self;

    fn from_rational(r: &BigRational) -> Self;

    fn to_f64(&self) -> f64;
}

impl Field for BigRational {
    fn from_ratio(p: i64, q: i64) -> Self {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Field for f64 {
    fn from_ratio(p: i64, q: i64) -> Self {
        p as f64 / q as f64
    }

    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Field for f32 {
    fn from_ratio(p: i64, q: i64) -> Self {
        p as f32 / q as f32
    }

    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f32(r).unwrap_or(f32::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

pub(crate) fn int_rat<T: Into<BigInt>>(n: T) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `p/q` rendering of an exact rational, integers without denominator.
pub fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q` or a finite decimal such as `0.25` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q == BigInt::from(0) {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches('-'), frac);
        let n: BigInt = digits.parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(n, scale);
        return Some(if neg { -r } else { r });
    }
    s.parse::<BigInt>().ok().map(BigRational::from_integer)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1/16"), Some(rat(1, 16)));
        assert_eq!(parse_rational("0.25"), Some(rat(1, 4)));
        assert_eq!(parse_rational("-1.5"), Some(rat(-3, 2)));
        assert_eq!(parse_rational("7"), Some(rat(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(rational_string(&rat(10, 4)), "5/2");
    }

    #[test]
    fn float_fields_agree_with_rationals() {
        let r = <BigRational as Field>::from_ratio(-5, 2);
        assert_eq!(Field::to_f64(&r), -2.5);
        assert_eq!(<f32 as Field>::from_ratio(1, 4), 0.25f32);
    }
}
