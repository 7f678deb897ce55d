//! Coefficient fields for forms: exact Gaussian rationals and IEEE complex doubles.
//!
//! Forms, curvature matrices and Chern forms are generic over [`Coeff`]. The
//! scalar mode is a type parameter, so an exact form can never be combined with
//! a floating-point one; conversion is explicit through [`Coeff::to_c64`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Which arithmetic a coefficient type implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Exact,
    Float,
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarMode::Exact => f.write_str("exact"),
            ScalarMode::Float => f.write_str("float"),
        }
    }
}

/// A complex coefficient field.
pub trait Coeff:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const MODE: ScalarMode;

    fn zero() -> Self;
    fn one() -> Self;
    /// The imaginary unit √−1.
    fn imag_unit() -> Self;
    fn from_i64(re: i64, im: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Self;
    fn from_rational(v: &BigRational) -> Self;
    fn is_zero(&self) -> bool;
    fn conj(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn to_c64(&self) -> Complex64;
    /// Modulus as a double, used for scales and pivoting.
    fn abs_f64(&self) -> f64;
    /// The real part, as an element of the same field.
    fn re_part(&self) -> Self;
    /// The imaginary part, as an element of the same field.
    fn im_part(&self) -> Self;

    /// `self` raised to a nonnegative integer power.
    fn powu(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }

    /// `(√−1)^k` for any integer `k`.
    fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::from_i64(1, 0),
            1 => Self::from_i64(0, 1),
            2 => Self::from_i64(-1, 0),
            _ => Self::from_i64(0, -1),
        }
    }
}

impl Coeff for Complex64 {
    const MODE: ScalarMode = ScalarMode::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn from_i64(re: i64, im: i64) -> Self {
        Complex64::new(re as f64, im as f64)
    }
    fn from_bigint(v: &BigInt) -> Self {
        Complex64::new(v.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_rational(v: &BigRational) -> Self {
        Complex64::new(v.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn inv(&self) -> Option<Self> {
        if Coeff::is_zero(self) {
            None
        } else {
            Some(Complex64::inv(self))
        }
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn abs_f64(&self) -> f64 {
        self.norm()
    }
    fn re_part(&self) -> Self {
        Complex64::new(self.re, 0.0)
    }
    fn im_part(&self) -> Self {
        Complex64::new(self.im, 0.0)
    }
}

/// Exact complex number `re + √−1·im` with arbitrary-precision rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    /// `(re_num/den) + √−1·(im_num/den)`.
    pub fn from_ratio(re_num: i64, im_num: i64, den: i64) -> Self {
        let d = BigInt::from(den);
        GaussianRational {
            re: BigRational::new(BigInt::from(re_num), d.clone()),
            im: BigRational::new(BigInt::from(im_num), d),
        }
    }

    /// Exact conversion of a double (every finite double is a dyadic rational).
    pub fn from_f64_exact(c: Complex64) -> Option<Self> {
        Some(GaussianRational {
            re: BigRational::from_float(c.re)?,
            im: BigRational::from_float(c.im)?,
        })
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        GaussianRational {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        GaussianRational {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational {
                re: self.re * rhs.re,
                im: BigRational::zero(),
            };
        }
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Coeff for GaussianRational {
    const MODE: ScalarMode = ScalarMode::Exact;

    fn zero() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }
    fn one() -> Self {
        GaussianRational {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }
    fn imag_unit() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }
    fn from_i64(re: i64, im: i64) -> Self {
        GaussianRational {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }
    fn from_bigint(v: &BigInt) -> Self {
        GaussianRational {
            re: BigRational::from_integer(v.clone()),
            im: BigRational::zero(),
        }
    }
    fn from_rational(v: &BigRational) -> Self {
        GaussianRational {
            re: v.clone(),
            im: BigRational::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -&self.im,
        }
    }
    fn inv(&self) -> Option<Self> {
        if Coeff::is_zero(self) {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
    fn abs_f64(&self) -> f64 {
        self.to_c64().norm()
    }
    fn re_part(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: BigRational::zero(),
        }
    }
    fn im_part(&self) -> Self {
        GaussianRational {
            re: self.im.clone(),
            im: BigRational::zero(),
        }
    }
}

/// Parse an exact rational from a decimal or `p/q` literal.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all_digits.parse::<BigInt>().ok()?);
    let shift = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if shift >= 0 {
        for _ in 0..shift {
            value *= &ten;
        }
    } else {
        for _ in 0..(-shift) {
            value /= &ten;
        }
    }
    Some(if negative { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_inverse_is_exact() {
        let z = GaussianRational::from_ratio(3, 4, 5);
        let w = z.inv().unwrap();
        assert_eq!(z * w, GaussianRational::one());
        assert!(GaussianRational::zero().inv().is_none());
    }

    #[test]
    fn i_pow_cycles() {
        let i = GaussianRational::imag_unit();
        assert_eq!(GaussianRational::i_pow(3), i.clone() * i.clone() * i);
        assert_eq!(GaussianRational::i_pow(-1), GaussianRational::from_i64(0, -1));
        assert_eq!(Complex64::i_pow(4), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn parses_decimals_exactly() {
        let tenth = parse_rational("0.1").unwrap();
        assert_eq!(tenth, BigRational::new(1.into(), 10.into()));
        assert_eq!(parse_rational("-2.5e1").unwrap(), BigRational::from_integer((-25).into()));
        assert_eq!(parse_rational("3/6").unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("1e-2").unwrap(), BigRational::new(1.into(), 100.into()));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("abc").is_none());
        assert!(parse_rational("").is_none());
    }
}
