use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AsymptoticsError;

/// Exact value `q · π^{h/2} · √2^{s}` with `q` rational and `s ∈ {0, 1}`.
///
/// Every Gamma value at a half-integer and every power `u_c^{γ}` met here has
/// this form; the `√2` only appears through powers of `1/2` with half-integer
/// exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    q: BigRational,
    pi_half: i32,
    sqrt2: bool,
}

impl ExactScalar {
    pub fn new(q: BigRational, pi_half: i32, sqrt2: bool) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self { q, pi_half, sqrt2 }
    }

    pub fn zero() -> Self {
        Self {
            q: BigRational::zero(),
            pi_half: 0,
            sqrt2: false,
        }
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn rational(q: BigRational) -> Self {
        Self::new(q, 0, false)
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(p: i64, d: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(p), BigInt::from(d)))
    }

    /// `π^{h/2}`.
    pub fn pi_power(h: i32) -> Self {
        Self::new(BigRational::one(), h, false)
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn pi_half(&self) -> i32 {
        self.pi_half
    }

    pub fn has_sqrt2(&self) -> bool {
        self.sqrt2
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.pi_half == 0 && !self.sqrt2
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.q)
    }

    pub fn is_positive(&self) -> bool {
        self.q.is_positive()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut q = &self.q * &other.q;
        let sqrt2 = self.sqrt2 ^ other.sqrt2;
        if self.sqrt2 && other.sqrt2 {
            q *= BigInt::from(2);
        }
        Self::new(q, self.pi_half + other.pi_half, sqrt2)
    }

    pub fn inv(&self) -> Result<Self, AsymptoticsError> {
        if self.is_zero() {
            return Err(AsymptoticsError::DivisionByZero);
        }
        // 1/(q√2) = √2/(2q)
        let q = if self.sqrt2 {
            (self.q.clone() * BigInt::from(2)).recip()
        } else {
            self.q.recip()
        };
        Ok(Self::new(q, -self.pi_half, self.sqrt2))
    }

    pub fn div(&self, other: &Self) -> Result<Self, AsymptoticsError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Sum of two values with the same irrational part.
    pub fn add(&self, other: &Self) -> Result<Self, AsymptoticsError> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_half != other.pi_half || self.sqrt2 != other.sqrt2 {
            return Err(AsymptoticsError::IncompatibleTerms(
                self.to_string(),
                other.to_string(),
            ));
        }
        Ok(Self::new(&self.q + &other.q, self.pi_half, self.sqrt2))
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.q.clone(), self.pi_half, self.sqrt2)
    }

    pub fn powi(&self, e: i32) -> Result<Self, AsymptoticsError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        Ok((0..e.unsigned_abs()).fold(Self::one(), |acc, _| acc.mul(&base)))
    }

    pub fn to_f64(&self) -> f64 {
        let mut v = self.q.to_f64().unwrap_or(f64::NAN);
        v *= std::f64::consts::PI.powf(self.pi_half as f64 / 2.0);
        if self.sqrt2 {
            v *= std::f64::consts::SQRT_2;
        }
        v
    }

    /// The square, which is always rational times an integer power of `π`.
    pub fn square(&self) -> Self {
        self.mul(self)
    }
}

fn exact_sqrt_int(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact square root of a non-negative rational, if it lies in `Q ∪ Q·√2`.
pub fn sqrt_rational(q: &BigRational) -> Result<ExactScalar, AsymptoticsError> {
    if let (Some(n), Some(d)) = (exact_sqrt_int(q.numer()), exact_sqrt_int(q.denom())) {
        return Ok(ExactScalar::rational(BigRational::new(n, d)));
    }
    // √q = √(2q)/√2 = √(2q)·√2/2
    let twice = q * BigInt::from(2);
    if let (Some(n), Some(d)) = (exact_sqrt_int(twice.numer()), exact_sqrt_int(twice.denom())) {
        return Ok(ExactScalar::new(
            BigRational::new(n, d * BigInt::from(2)),
            0,
            true,
        ));
    }
    Err(AsymptoticsError::IrrationalConstant(format!(
        "square root of {q}"
    )))
}

/// `base^{num/2}` for a positive rational base.
pub fn pow_half(base: &BigRational, num: i64) -> Result<ExactScalar, AsymptoticsError> {
    let whole = ExactScalar::rational(base.clone()).powi((num.div_euclid(2)) as i32)?;
    if num.rem_euclid(2) == 0 {
        Ok(whole)
    } else {
        Ok(whole.mul(&sqrt_rational(base)?))
    }
}

/// Exact fourth root of a positive rational.
pub fn fourth_root(q: &BigRational) -> Result<BigRational, AsymptoticsError> {
    let err = || AsymptoticsError::IrrationalConstant(format!("fourth root of {q}"));
    let n = exact_sqrt_int(q.numer())
        .and_then(|r| exact_sqrt_int(&r))
        .ok_or_else(err)?;
    let d = exact_sqrt_int(q.denom())
        .and_then(|r| exact_sqrt_int(&r))
        .ok_or_else(err)?;
    Ok(BigRational::new(n, d))
}

fn pi_factor(h: i32) -> Option<String> {
    match h {
        0 => None,
        1 => Some("√π".into()),
        2 => Some("π".into()),
        h if h % 2 == 0 => Some(format!("π^{}", h / 2)),
        h => Some(format!("π^({h}/2)")),
    }
}

impl fmt::Display for ExactScalar {
    /// Renders e.g. `10/(3π)`, `19/15`, `√π/4`, `-2√π`, `3√2/8`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let sign = if self.q.is_negative() { "-" } else { "" };
        let num = self.q.numer().abs();
        let den = self.q.denom().clone();
        let mut top: Vec<String> = Vec::new();
        let mut bottom: Vec<String> = Vec::new();
        if !num.is_one() {
            top.push(num.to_string());
        }
        if self.sqrt2 {
            top.push("√2".into());
        }
        if !den.is_one() {
            bottom.push(den.to_string());
        }
        if self.pi_half > 0 {
            top.extend(pi_factor(self.pi_half));
        } else if self.pi_half < 0 {
            bottom.extend(pi_factor(-self.pi_half));
        }
        let top = if top.is_empty() {
            "1".to_string()
        } else {
            top.concat()
        };
        match bottom.len() {
            0 => write!(f, "{sign}{top}"),
            1 => write!(f, "{sign}{top}/{}", bottom[0]),
            _ => write!(f, "{sign}{top}/({})", bottom.concat()),
        }
    }
}
