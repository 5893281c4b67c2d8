//! Scalar abstraction shared by every map evaluation path.
//!
//! The combinatorial machinery only needs ordered field arithmetic, so the
//! same code runs over `f64`, `f32` and exact `BigRational`. Each scalar also
//! carries the tolerances that decide when an iterate "is" the discontinuity,
//! when a bisection has converged and how far a verification check must clear
//! its bound.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Num + Signed + PartialOrd + Clone + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// True when arithmetic is exact and all tolerances are zero.
    const EXACT: bool;

    /// Absolute threshold (relative to the domain scale) below which an
    /// iterate is identified with the discontinuity.
    fn zero_tol() -> Self;

    /// Interval width at which a bisection stops.
    fn bisect_tol() -> Self;

    /// Slack below which a verification check fails outright.
    fn margin() -> Self;

    /// Slack below which a passing check is still reported as uncertain.
    fn uncertain_band() -> Self;

    /// Lossy conversion used for reporting and float-only heuristics.
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Conversion from a float literal. Exact types convert the binary value exactly.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("integer") / Self::from_i64(den).expect("integer")
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn midpoint(a: &Self, b: &Self) -> Self {
        (a.clone() + b.clone()) / Self::two()
    }

    /// JSON form of a value: a number for floats, a `"num/den"` string for rationals.
    fn to_json(&self) -> serde_json::Value;

    /// Inverse of [`Scalar::to_json`]; floats also accept `"num/den"` strings.
    fn from_json(value: &serde_json::Value) -> Option<Self> {
        match value {
            serde_json::Value::Number(n) => Self::from_f64(n.as_f64()?),
            serde_json::Value::String(s) => Self::from_f64(parse_rational(s)?.to_f64()?),
            _ => None,
        }
    }

    /// True when the value is not a usable number (NaN or infinite).
    fn is_degenerate(&self) -> bool {
        false
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero_tol() -> Self {
        1e-12
    }
    fn bisect_tol() -> Self {
        1e-15
    }
    fn margin() -> Self {
        1e-10
    }
    fn uncertain_band() -> Self {
        1e-8
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }
    fn is_degenerate(&self) -> bool {
        !self.is_finite()
    }
}

// f32 cannot resolve the f64 tolerances; these are scaled to its epsilon.
impl Scalar for f32 {
    const EXACT: bool = false;

    fn zero_tol() -> Self {
        1e-6
    }
    fn bisect_tol() -> Self {
        1e-7
    }
    fn margin() -> Self {
        1e-5
    }
    fn uncertain_band() -> Self {
        1e-4
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(f64::from(*self))
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }
    fn is_degenerate(&self) -> bool {
        !self.is_finite()
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero_tol() -> Self {
        Self::zero()
    }
    // Exact bisection still has to stop somewhere; 2^-70 keeps denominators bounded.
    fn bisect_tol() -> Self {
        BigRational::new(BigInt::from(1), BigInt::from(1u8) << 70)
    }
    fn margin() -> Self {
        Self::zero()
    }
    fn uncertain_band() -> Self {
        Self::zero()
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format_rational(self))
    }
    fn from_json(value: &serde_json::Value) -> Option<Self> {
        match value {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Number(n) => BigRational::from_f64(n.as_f64()?),
            _ => None,
        }
    }
}

/// `"num/den"` with the denominator always present.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `"num/den"`, `"num"` or a plain decimal such as `"1.5"`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let negative = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(n, d);
        return Some(if negative { -r } else { r });
    }
    let n: BigInt = text.parse().ok()?;
    Some(BigRational::from_integer(n))
}
