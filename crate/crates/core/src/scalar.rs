//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! Forms are generic over a [`Scalar`]: `f64`/`f32` for floating-point work
//! and [`BigRational`] for exact identity checks. Complex arithmetic goes
//! through [`num_complex::Complex`] over the same scalar, so a rational form
//! evaluated at a Gaussian-rational point stays exact.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Coefficient ring for [`crate::Form`]: anything with ring operations.
///
/// Both real scalars and `Complex<S>` satisfy it, which lets directional
/// derivatives along complex vectors reuse the same exponent bookkeeping.
pub trait Coeff: Clone + fmt::Debug + PartialEq + Num + Send + Sync + 'static {}

impl<T> Coeff for T where T: Clone + fmt::Debug + PartialEq + Num + Send + Sync + 'static {}

/// Whether coefficients are exact rationals or floating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Rational,
    Float,
}

impl ScalarMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ScalarMode::Rational => "rational",
            ScalarMode::Float => "float",
        }
    }
}

/// Ordered real field used for form coefficients.
pub trait Scalar: Coeff + PartialOrd + Signed + fmt::Display {
    const MODE: ScalarMode;

    fn from_bigint(n: &BigInt) -> Self;

    /// Exact conversion where the representation allows it; `None` for NaN/inf.
    fn from_f64_exact(x: f64) -> Option<Self>;

    /// Lossy for rationals, identity for `f64`.
    fn as_f64(&self) -> f64;

    fn is_finite_value(&self) -> bool;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn from_biguint(n: &BigUint) -> Self {
        Self::from_bigint(&BigInt::from(n.clone()))
    }
}

impl Scalar for f64 {
    const MODE: ScalarMode = ScalarMode::Float;

    fn from_bigint(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }

    fn from_f64_exact(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }

    fn as_f64(&self) -> f64 {
        *self
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("bad number {n}"))),
            Value::String(s) => parse_rational(s).map(|r| r.as_f64()),
            other => Err(Error::Parse(format!("expected number, got {other}"))),
        }
    }
}

impl Scalar for f32 {
    const MODE: ScalarMode = ScalarMode::Float;

    fn from_bigint(n: &BigInt) -> Self {
        n.to_f32().unwrap_or(f32::NAN)
    }

    fn from_f64_exact(x: f64) -> Option<Self> {
        x.is_finite().then_some(x as f32)
    }

    fn as_f64(&self) -> f64 {
        *self as f64
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn to_json(&self) -> Value {
        (*self as f64).to_json()
    }

    fn from_json(v: &Value) -> Result<Self> {
        f64::from_json(v).map(|x| x as f32)
    }
}

impl Scalar for BigRational {
    const MODE: ScalarMode = ScalarMode::Rational;

    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn from_f64_exact(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_finite_value(&self) -> bool {
        true
    }

    fn to_json(&self) -> Value {
        Value::String(format!("{}/{}", self.numer(), self.denom()))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(BigRational::from_integer(BigInt::from(i)))
                } else {
                    n.as_f64()
                        .and_then(BigRational::from_float)
                        .ok_or_else(|| Error::Parse(format!("bad number {n}")))
                }
            }
            other => Err(Error::Parse(format!("expected rational, got {other}"))),
        }
    }
}

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

pub fn factorial_big(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

pub fn binomial_big(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `(Σ e)! / Π e_i!`
pub fn multinomial_big(exponents: &[u32]) -> BigUint {
    let total: u32 = exponents.iter().sum();
    let denom = exponents
        .iter()
        .fold(BigUint::one(), |acc, &e| acc * factorial_big(e));
    factorial_big(total) / denom
}

pub fn factorial<S: Scalar>(n: u32) -> S {
    S::from_biguint(&factorial_big(n))
}

pub fn binomial<S: Scalar>(n: u32, k: u32) -> S {
    S::from_biguint(&binomial_big(n, k))
}

pub fn multinomial<S: Scalar>(exponents: &[u32]) -> S {
    S::from_biguint(&multinomial_big(exponents))
}

/// Lifts a real vector into the complex plane.
pub fn complexify<S: Scalar>(x: &[S]) -> Vec<Complex<S>> {
    x.iter().map(|v| Complex::new(v.clone(), S::zero())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip_through_json() {
        let r = BigRational::new(BigInt::from(-7), BigInt::from(12));
        let v = r.to_json();
        assert_eq!(v, Value::String("-7/12".into()));
        assert_eq!(BigRational::from_json(&v).unwrap(), r);
        assert_eq!(
            BigRational::from_json(&Value::String("5".into())).unwrap(),
            BigRational::from_integer(5.into())
        );
    }

    #[test]
    fn rejects_zero_denominator() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1.5/2").is_err());
    }

    #[test]
    fn combinatorics() {
        assert_eq!(factorial_big(5), BigUint::from(120u32));
        assert_eq!(binomial_big(8, 4), BigUint::from(70u32));
        assert_eq!(binomial_big(3, 5), BigUint::zero());
        assert_eq!(multinomial_big(&[2, 1, 1]), BigUint::from(12u32));
        assert_eq!(multinomial::<f64>(&[1, 1]), 2.0);
    }
}
