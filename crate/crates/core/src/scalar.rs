use std::fmt::{Debug, Display};
use std::ops::Neg;

use num::bigint::BigInt;
use num::rational::BigRational;
use num_traits::{FromPrimitive, Num, ToPrimitive, Zero};
use serde_json::Value;

/// Field element used by the minor solver and the certificates.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + Num + Neg<Output = Self> + Send + Sync + 'static
{
    fn from_f64(v: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;

    /// Relative tolerance below which a pivot coefficient counts as zero.
    fn tolerance() -> f64;

    fn is_exact() -> bool {
        false
    }

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    fn is_negligible(&self, scale: f64) -> bool {
        self.magnitude() <= Self::tolerance() * scale
    }

    /// Lossless textual form; parsed back by [`Scalar::parse_exact`].
    fn to_exact_string(&self) -> String;
    fn parse_exact(s: &str) -> Option<Self>;

    /// Exact rational value, `None` for non-finite floats.
    fn to_rational(&self) -> Option<BigRational>;

    fn to_json_value(&self) -> Value {
        Value::String(self.to_exact_string())
    }

    fn from_json_value(v: &Value) -> Option<Self> {
        match v {
            Value::String(s) => Self::parse_exact(s),
            Value::Number(x) => Self::parse_exact(&x.to_string()),
            _ => None,
        }
    }
}

impl Scalar for f64 {
    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn tolerance() -> f64 {
        1e-10
    }
    fn to_exact_string(&self) -> String {
        format!("{self:?}")
    }
    fn parse_exact(s: &str) -> Option<Self> {
        s.parse().ok()
    }
    fn to_rational(&self) -> Option<BigRational> {
        BigRational::from_float(*self)
    }
    fn to_json_value(&self) -> Value {
        serde_json::Number::from_f64(*self as f64).map_or(Value::Null, Value::Number)
    }
}

impl Scalar for f32 {
    fn from_f64(v: f64) -> Option<Self> {
        let x = v as f32;
        x.is_finite().then_some(x)
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
    fn tolerance() -> f64 {
        1e-5
    }
    fn to_exact_string(&self) -> String {
        format!("{self:?}")
    }
    fn parse_exact(s: &str) -> Option<Self> {
        s.parse().ok()
    }
    fn to_rational(&self) -> Option<BigRational> {
        BigRational::from_float(*self)
    }
    fn to_json_value(&self) -> Value {
        serde_json::Number::from_f64(*self as f64).map_or(Value::Null, Value::Number)
    }
}

impl Scalar for BigRational {
    fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn tolerance() -> f64 {
        0.0
    }
    fn is_exact() -> bool {
        true
    }
    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
    fn to_exact_string(&self) -> String {
        if self.denom() == &BigInt::from(1) {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
    fn parse_exact(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            return Some(BigRational::new(p, q));
        }
        if let Ok(i) = s.parse::<BigInt>() {
            return Some(BigRational::from_integer(i));
        }
        parse_decimal(s)
    }
    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
}

/// Parses a finite decimal literal such as `-12.5e-3` exactly.
fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let scale = exp - frac_part.len() as i32 - 1;
    let ten = BigRational::from_u8(10)?;
    let mut v = BigRational::from_integer(digits);
    let mut k = scale;
    while k > 0 {
        v *= ten.clone();
        k -= 1;
    }
    while k < 0 {
        v /= ten.clone();
        k += 1;
    }
    Some(if neg { -v } else { v })
}
