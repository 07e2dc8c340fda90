//! Coefficient backends for the series arithmetic.
//!
//! Every series type is generic over a [`Scalar`]. Two backends are provided:
//! exact rationals ([`Rational`], backed by `num::BigRational`) for the
//! verification path, where all identities are asserted with equality, and
//! `f64` for meshing and Monte-Carlo sweeps, where zero tests use a tolerance.
//!
//! Mixing backends is a compile-time error; at the JSON boundary the declared
//! `"backend"` tag is checked against the coefficient encoding instead.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, BigRational, ToPrimitive};
use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Exact coefficient type of the rational backend.
pub type Rational = BigRational;

/// Which coefficient backend a series uses, as named in serialized form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Backend {
    #[serde(rename = "rational")]
    Rational,
    #[serde(rename = "float")]
    Float,
}

impl Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Backend::Rational => write!(f, "rational"),
            Backend::Float => write!(f, "float"),
        }
    }
}

/// Coefficient field of a truncated power series.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
    + Send
    + Sync
    + 'static
{
    const BACKEND: Backend;

    fn from_i64(n: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Exact image of a finite float (every finite `f64` is rational).
    fn from_f64(x: f64) -> Self;

    /// Nearest `f64`, used for reporting and tolerance tests.
    fn to_f64(&self) -> f64;

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    /// Exact backends ignore `tol` and test literal zero.
    fn approx_zero(&self, tol: f64) -> bool {
        if Self::BACKEND == Backend::Rational {
            self.is_zero()
        } else {
            self.magnitude() <= tol
        }
    }

    fn coeff_to_json(&self) -> Value;

    fn coeff_from_json(value: &Value) -> Result<Self>;
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Rational;

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite float")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // Out-of-range numerator or denominator; fall back to the ratio
            // of rounded parts.
            let n = self.numer().to_f64().unwrap_or(f64::INFINITY);
            let d = self.denom().to_f64().unwrap_or(f64::INFINITY);
            n / d
        })
    }

    fn coeff_to_json(&self) -> Value {
        Value::String(format!("{}/{}", self.numer(), self.denom()))
    }

    fn coeff_from_json(value: &Value) -> Result<Self> {
        let s = value.as_str().ok_or_else(|| {
            Error::BackendMismatch {
                expected: Backend::Rational,
                found: Backend::Float,
            }
        })?;
        parse_rational(s)
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn coeff_to_json(&self) -> Value {
        serde_json::json!(self)
    }

    fn coeff_from_json(value: &Value) -> Result<Self> {
        value.as_f64().ok_or(Error::BackendMismatch {
            expected: Backend::Float,
            found: Backend::Rational,
        })
    }
}

/// Parses `"num/den"` (or a bare integer) into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let parse_int = |part: &str| -> Result<BigInt> {
        part.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::InvalidSeries(format!("bad rational coefficient {s:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(Error::InvalidSeries(format!(
                    "zero denominator in coefficient {s:?}"
                )));
            }
            Ok(BigRational::new(parse_int(n)?, den))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

/// Shorthand for building rationals in code and tests.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

/// Binomial coefficient as an exact scalar; used by Taylor recentering and
/// the `(1+s)^{-1/2}` expansion of the sphere chart.
pub fn binomial<K: Scalar>(n: usize, k: usize) -> K {
    if k > n {
        return K::zero();
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for j in 0..k.min(n - k) {
        num *= (n - j) as u128;
        den *= (j + 1) as u128;
    }
    K::from_ratio((num / den) as i64, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        let x = rat(-7, 12);
        let json = x.coeff_to_json();
        assert_eq!(json, Value::String("-7/12".into()));
        assert_eq!(Rational::coeff_from_json(&json).unwrap(), x);
    }

    #[test]
    fn parses_bare_integers() {
        assert_eq!(parse_rational("5").unwrap(), rat(5, 1));
        assert_eq!(parse_rational("-3/9").unwrap(), rat(-1, 3));
    }

    #[test]
    fn rejects_zero_denominator() {
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn float_coeff_rejects_strings() {
        assert!(f64::coeff_from_json(&Value::String("1/2".into())).is_err());
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial::<Rational>(4, 2), rat(6, 1));
        assert_eq!(binomial::<Rational>(8, 0), rat(1, 1));
        assert_eq!(binomial::<Rational>(3, 5), rat(0, 1));
    }
}
