use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{AsymptoticsError, ExactScalar};
use crate::multiindex::factorial;

/// Exact `Γ(x)` for integer or half-integer `x`.
pub fn gamma(x: &BigRational) -> Result<ExactScalar, AsymptoticsError> {
    let two_x = x * BigInt::from(2);
    if !two_x.is_integer() {
        return Err(AsymptoticsError::IrrationalConstant(format!("Gamma({x})")));
    }
    if x.is_integer() {
        if !x.is_positive() {
            return Err(AsymptoticsError::GammaPole(x.to_string()));
        }
        let n = x
            .to_u32()
            .ok_or_else(|| AsymptoticsError::InvalidParameter(format!("Gamma({x}) too large")))?;
        return Ok(ExactScalar::rational(BigRational::from_integer(
            factorial(n - 1).into(),
        )));
    }
    if x.is_negative() {
        // Γ(x) = Γ(x + 1) / x
        let next = gamma(&(x + BigRational::one()))?;
        return next.div(&ExactScalar::rational(x.clone()));
    }
    // Γ(n + 1/2) = (2n)! √π / (4^n n!)
    let n = (x - BigRational::new(1.into(), 2.into()))
        .to_u32()
        .expect("half-integer in range");
    let num = BigInt::from(factorial(2 * n));
    let den = BigInt::from(4).pow(n) * BigInt::from(factorial(n));
    debug_assert!(!den.is_zero());
    Ok(ExactScalar::new(BigRational::new(num, den), 1, false))
}
