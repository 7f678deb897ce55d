//! JSON literals for complex coefficients: `{"re": .., "im": ..}`.
//!
//! Parts may be JSON numbers or strings holding a decimal or `p/q` rational.
//! Exact mode reads numbers through their decimal text, so `0.1` is `1/10`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Coeff, GaussianRational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexLiteral {
    pub re: Value,
    #[serde(default = "zero_value")]
    pub im: Value,
}

fn zero_value() -> Value {
    Value::from(0)
}

impl ComplexLiteral {
    pub fn from_f64(re: f64, im: f64) -> Self {
        ComplexLiteral {
            re: f64_value(re),
            im: f64_value(im),
        }
    }
}

fn f64_value(x: f64) -> Value {
    Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn rational_value(x: &BigRational) -> Value {
    if x.denom().is_one() {
        if let Some(v) = x.numer().to_i64() {
            return Value::from(v);
        }
    }
    Value::String(x.to_string())
}

fn value_to_f64(v: &Value, field: &str) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::parse(field, "number out of range")),
        Value::String(s) => parse_rational(s)
            .and_then(|r| r.to_f64())
            .ok_or_else(|| Error::parse(field, format!("invalid number {s:?}"))),
        Value::Null => Ok(0.0),
        other => Err(Error::parse(field, format!("expected a number, got {other}"))),
    }
    .and_then(|x| {
        if x.is_finite() {
            Ok(x)
        } else {
            Err(Error::parse(field, "non-finite number"))
        }
    })
}

fn value_to_rational(v: &Value, field: &str) -> Result<BigRational> {
    match v {
        Value::Number(n) => parse_rational(&n.to_string())
            .ok_or_else(|| Error::parse(field, format!("invalid number {n}"))),
        Value::String(s) => {
            parse_rational(s).ok_or_else(|| Error::parse(field, format!("invalid number {s:?}")))
        }
        Value::Null => Ok(BigRational::zero()),
        other => Err(Error::parse(field, format!("expected a number, got {other}"))),
    }
}

/// Coefficient types that can be read from and written to JSON literals.
pub trait CoeffLiteral: Coeff {
    fn from_literal(lit: &ComplexLiteral, field: &str) -> Result<Self>;
    fn to_literal(&self) -> ComplexLiteral;
}

impl CoeffLiteral for Complex64 {
    fn from_literal(lit: &ComplexLiteral, field: &str) -> Result<Self> {
        Ok(Complex64::new(
            value_to_f64(&lit.re, &format!("{field}.re"))?,
            value_to_f64(&lit.im, &format!("{field}.im"))?,
        ))
    }

    fn to_literal(&self) -> ComplexLiteral {
        ComplexLiteral::from_f64(self.re, self.im)
    }
}

impl CoeffLiteral for GaussianRational {
    fn from_literal(lit: &ComplexLiteral, field: &str) -> Result<Self> {
        Ok(GaussianRational::new(
            value_to_rational(&lit.re, &format!("{field}.re"))?,
            value_to_rational(&lit.im, &format!("{field}.im"))?,
        ))
    }

    fn to_literal(&self) -> ComplexLiteral {
        ComplexLiteral {
            re: rational_value(&self.re),
            im: rational_value(&self.im),
        }
    }
}
