use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{domain, Result};

/// A non-transcendental quantity held as an exact rational, a natural
/// logarithm, or both.
///
/// Exact mode keeps the reduced fraction and caches its logarithm. Log mode
/// (used once factorials grow past a few hundred) keeps only the logarithm and
/// can therefore only represent strictly positive values.
#[derive(Clone, Debug)]
pub struct ExactScalar {
    exact: Option<BigRational>,
    ln: Option<f64>,
}

impl ExactScalar {
    pub fn from_ratio(value: BigRational) -> Self {
        let ln = if value.is_positive() {
            Some(ln_ratio(&value))
        } else {
            None
        };
        Self {
            exact: Some(value),
            ln,
        }
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Self::from_ratio(BigRational::from_integer(value.into()))
    }

    pub fn from_fraction(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Self {
        Self::from_ratio(BigRational::new(numerator.into(), denominator.into()))
    }

    /// A strictly positive value known only through its logarithm.
    pub fn from_ln(ln: f64) -> Self {
        Self {
            exact: None,
            ln: Some(ln),
        }
    }

    pub fn zero() -> Self {
        Self::from_ratio(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_ratio(BigRational::one())
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn as_ratio(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    pub fn numerator(&self) -> Option<&BigInt> {
        self.exact.as_ref().map(|r| r.numer())
    }

    pub fn denominator(&self) -> Option<&BigInt> {
        self.exact.as_ref().map(|r| r.denom())
    }

    /// Natural logarithm, present whenever the value is strictly positive.
    pub fn ln(&self) -> Option<f64> {
        self.ln
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.exact, Some(r) if r.is_zero())
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(r) = &self.exact {
            if let Some(v) = r.to_f64() {
                if v.is_finite() && (v != 0.0 || r.is_zero()) {
                    return v;
                }
            }
            if r.is_negative() {
                return -ExactScalar::from_ratio(-r.clone()).to_f64();
            }
        }
        self.ln.map(f64::exp).unwrap_or(0.0)
    }

    /// Drops the exact fraction, keeping only the logarithm.
    pub fn to_log_mode(&self) -> Result<Self> {
        match self.ln {
            Some(ln) => Ok(Self::from_ln(ln)),
            None => Err(domain("only strictly positive values have a log-mode form")),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        match (&self.exact, self.ln) {
            (Some(r), _) if r.is_zero() => Err(domain("reciprocal of zero")),
            (Some(r), _) => Ok(Self::from_ratio(r.recip())),
            (None, Some(ln)) => Ok(Self::from_ln(-ln)),
            (None, None) => unreachable!("log-mode scalar without a logarithm"),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Self::from_ratio(a * b),
            _ => Self::from_ln(self.ln_or_panic() + other.ln_or_panic()),
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    /// Integer power; negative exponents require a non-zero value.
    pub fn powi(&self, exponent: i64) -> Result<Self> {
        if exponent == 0 {
            return Ok(Self::one());
        }
        if exponent < 0 {
            return self.recip()?.powi(-exponent);
        }
        match &self.exact {
            Some(r) => {
                let e = i32::try_from(exponent).map_err(|_| domain("exponent too large"))?;
                Ok(Self::from_ratio(num_traits::pow::Pow::pow(r, e)))
            }
            None => Ok(Self::from_ln(self.ln_or_panic() * exponent as f64)),
        }
    }

    /// Ordering against one, computed exactly whenever possible.
    pub fn cmp_one(&self) -> Ordering {
        match (&self.exact, self.ln) {
            (Some(r), _) => r.cmp(&BigRational::one()),
            (None, Some(ln)) => ln.partial_cmp(&0.0).unwrap_or(Ordering::Equal),
            (None, None) => unreachable!("log-mode scalar without a logarithm"),
        }
    }

    fn ln_or_panic(&self) -> f64 {
        self.ln
            .expect("log-mode arithmetic requires strictly positive operands")
    }
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => a == b,
            _ => self.ln == other.ln,
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Some(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            None => write!(f, "exp({})", self.ln.unwrap_or(f64::NEG_INFINITY)),
        }
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ExactScalar", 4)?;
        s.serialize_field("numerator", &self.numerator().map(|n| n.to_string()))?;
        s.serialize_field("denominator", &self.denominator().map(|n| n.to_string()))?;
        s.serialize_field("float", &self.to_f64())?;
        s.serialize_field("ln", &self.ln)?;
        s.end()
    }
}

/// Natural logarithm of a positive big integer, accurate to double precision
/// even when the integer has far more bits than an `f64` exponent allows.
pub(crate) fn ln_bigint(n: &BigInt) -> f64 {
    debug_assert_eq!(n.sign(), Sign::Plus);
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().map(f64::ln).unwrap_or(f64::NAN);
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    top.to_f64().map(f64::ln).unwrap_or(f64::NAN) + shift as f64 * std::f64::consts::LN_2
}

pub(crate) fn ln_ratio(r: &BigRational) -> f64 {
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_and_logged() {
        let x = ExactScalar::from_fraction(78, 64);
        assert_eq!(x.numerator().unwrap(), &BigInt::from(39));
        assert_eq!(x.denominator().unwrap(), &BigInt::from(32));
        assert!((x.ln().unwrap() - (39.0f64 / 32.0).ln()).abs() < 1e-15);
        assert_eq!(x.to_string(), "39/32");
    }

    #[test]
    fn huge_ratio_log_is_accurate() {
        // 3^5000 / 2^7000
        let num = num_traits::pow::Pow::pow(BigInt::from(3), 5000u32);
        let den = num_traits::pow::Pow::pow(BigInt::from(2), 7000u32);
        let x = ExactScalar::from_ratio(BigRational::new(num, den));
        let expected = 5000.0 * 3f64.ln() - 7000.0 * 2f64.ln();
        let got = x.ln().unwrap();
        assert!(((got - expected) / expected).abs() < 1e-12);
        assert!((x.to_f64().ln() - expected).abs() < 1e-9);
    }

    #[test]
    fn zero_has_no_log_and_no_reciprocal() {
        let z = ExactScalar::zero();
        assert!(z.ln().is_none());
        assert!(z.recip().is_err());
        assert!(z.to_log_mode().is_err());
        assert_eq!(z.to_f64(), 0.0);
    }

    #[test]
    fn mixed_mode_arithmetic_falls_back_to_logs() {
        let a = ExactScalar::from_fraction(3, 4);
        let b = ExactScalar::from_ln(2.0);
        let c = a.mul(&b);
        assert!(!c.is_exact());
        assert!((c.ln().unwrap() - (0.75f64.ln() + 2.0)).abs() < 1e-15);
        let d = a.powi(-3).unwrap();
        assert_eq!(d, ExactScalar::from_fraction(64, 27));
        assert_eq!(ExactScalar::from_fraction(9, 8).cmp_one(), Ordering::Greater);
        assert_eq!(ExactScalar::from_ln(-1e-3).cmp_one(), Ordering::Less);
    }
}
