//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All algorithms are written against [`Scalar`]. Exact types (`BigRational`,
//! `Rational64`) give bit-exact argmin and tie decisions; floating point types
//! are supported for presentation and quick experiments, with equality
//! replaced by a relative tolerance where the algorithms need it.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Scalar: Clone + Debug + Display + PartialOrd + Signed + Send + Sync + 'static {
    /// True when arithmetic is exact (rational types).
    const EXACT: bool;

    fn from_int(v: i64) -> Self;

    fn from_ratio(numer: i64, denom: i64) -> Self;

    /// Exact rational value; `None` for non-finite floats.
    fn to_big_ratio(&self) -> Option<BigRational>;

    fn from_big_ratio(r: &BigRational) -> Self;

    fn to_f64(&self) -> f64;

    /// Square root when it exists in the type (perfect rational squares for exact types).
    fn sqrt_exact(&self) -> Option<Self>;

    /// Equality for exact types; relative tolerance for floats.
    fn close_to(&self, other: &Self) -> bool;

    /// Parses `"p/q"`, `"p"`, or (for floats) a decimal literal.
    fn parse_ratio(s: &str) -> Result<Self> {
        let r = parse_big_ratio(s)?;
        Ok(Self::from_big_ratio(&r))
    }

    /// `"p/q"` for exact types (`"p"` when integral); decimal for floats.
    fn to_ratio_string(&self) -> String {
        match self.to_big_ratio() {
            Some(r) if Self::EXACT => format_big_ratio(&r),
            _ => format!("{}", self.to_f64()),
        }
    }

    /// Integer value when the scalar is (close to) an integer.
    fn integer_value(&self) -> Option<i64> {
        if Self::EXACT {
            let r = self.to_big_ratio()?;
            if r.is_integer() {
                r.to_integer().to_i64()
            } else {
                None
            }
        } else {
            let f = self.to_f64();
            let rounded = f.round();
            if (f - rounded).abs() <= 1e-9 * f.abs().max(1.0) {
                Some(rounded as i64)
            } else {
                None
            }
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
}

pub(crate) fn parse_big_ratio(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::parse(1, 1, "empty number"));
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim())
            .map_err(|_| Error::parse(1, 1, format!("bad numerator in `{t}`")))?;
        let q = BigInt::from_str(q.trim())
            .map_err(|_| Error::parse(1, 1, format!("bad denominator in `{t}`")))?;
        if q.is_zero() {
            return Err(Error::parse(1, 1, format!("zero denominator in `{t}`")));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Ok(i) = BigInt::from_str(t) {
        return Ok(BigRational::from_integer(i));
    }
    // Decimal literal: "0.25", "-1.5", no exponent.
    if let Some((int, frac)) = t.split_once('.') {
        if frac.chars().all(|c| c.is_ascii_digit()) {
            let negative = int.starts_with('-');
            let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
            if let Ok(num) = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }) {
                let den = num_traits::pow(BigInt::from(10), frac.len());
                let r = BigRational::new(num, den);
                return Ok(if negative { -r } else { r });
            }
        }
    }
    Err(Error::parse(1, 1, format!("not a rational number: `{t}`")))
}

pub(crate) fn format_big_ratio(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn isqrt_big(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &s * &s == *n {
        Some(s)
    } else {
        None
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn to_big_ratio(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn from_big_ratio(r: &BigRational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sqrt_exact(&self) -> Option<Self> {
        let n = isqrt_big(self.numer())?;
        let d = isqrt_big(self.denom())?;
        Some(BigRational::new(n, d))
    }

    fn close_to(&self, other: &Self) -> bool {
        self == other
    }
}

impl Scalar for Rational64 {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v)
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Ratio::new(numer, denom)
    }

    fn to_big_ratio(&self) -> Option<BigRational> {
        Some(BigRational::new(
            BigInt::from(*self.numer()),
            BigInt::from(*self.denom()),
        ))
    }

    fn from_big_ratio(r: &BigRational) -> Self {
        let n = r.numer().to_i64().expect("numerator exceeds i64");
        let d = r.denom().to_i64().expect("denominator exceeds i64");
        Ratio::new(n, d)
    }

    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }

    fn sqrt_exact(&self) -> Option<Self> {
        let n = isqrt_big(&BigInt::from(*self.numer()))?;
        let d = isqrt_big(&BigInt::from(*self.denom()))?;
        Some(Ratio::new(n.to_i64()?, d.to_i64()?))
    }

    fn close_to(&self, other: &Self) -> bool {
        self == other
    }
}

macro_rules! float_scalar {
    ($t:ty, $eps:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_int(v: i64) -> Self {
                v as $t
            }

            fn from_ratio(numer: i64, denom: i64) -> Self {
                numer as $t / denom as $t
            }

            fn to_big_ratio(&self) -> Option<BigRational> {
                BigRational::from_float(*self)
            }

            fn from_big_ratio(r: &BigRational) -> Self {
                ToPrimitive::to_f64(r).unwrap_or(f64::NAN) as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn sqrt_exact(&self) -> Option<Self> {
                if *self < 0.0 {
                    None
                } else {
                    Some(self.sqrt())
                }
            }

            fn close_to(&self, other: &Self) -> bool {
                let scale = self.abs().max(other.abs()).max(1.0);
                (self - other).abs() <= $eps * scale
            }
        }
    };
}

float_scalar!(f64, 1e-9);
float_scalar!(f32, 1e-4);

/// `base^exp` by repeated multiplication.
pub fn powi<S: Scalar>(base: &S, exp: u32) -> S {
    num_traits::pow(base.clone(), exp as usize)
}

/// Sum of a slice of scalars.
pub fn sum<'a, S: Scalar>(values: impl IntoIterator<Item = &'a S>) -> S {
    values.into_iter().fold(S::zero(), |acc, v| acc + v.clone())
}

/// Least common multiple of the denominators of a set of exact rationals.
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}
