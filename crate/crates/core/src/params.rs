//! Model parameters and exact scalar inputs.

use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::interval::CertifiedInterval;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("lambda must be a finite positive number, got {0}")]
    Lambda(f64),
    #[error("p must lie strictly between 0 and 1, got {0}")]
    Probability(f64),
    #[error("cannot parse `{0}` as a number or fraction")]
    Parse(alloc::string::String),
    #[error("zero denominator")]
    ZeroDenominator,
}

/// A real input that remembers whether it was given as an exact fraction.
///
/// Decimal strings such as `"0.8"` parse to the fraction `4/5`, so threshold
/// tests made on a `Scalar` are exact. Floats are themselves exact dyadic
/// rationals and are compared as such.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scalar {
    Float(f64),
    /// `num / den` with `den > 0`, kept in lowest terms.
    Ratio {
        num: i128,
        den: i128,
    },
}

impl Scalar {
    pub fn ratio(num: i128, den: i128) -> Result<Self, ParamError> {
        if den == 0 {
            return Err(ParamError::ZeroDenominator);
        }
        let g = num.gcd(&den);
        let sign = if den < 0 { -1 } else { 1 };
        Ok(Scalar::Ratio {
            num: sign * num / g,
            den: sign * den / g,
        })
    }

    /// Nearest `f64`.
    pub fn value(&self) -> f64 {
        match *self {
            Scalar::Float(x) => x,
            Scalar::Ratio { num, den } => {
                let r = BigRational::new(BigInt::from(num), BigInt::from(den));
                r.to_f64().unwrap_or(f64::NAN)
            }
        }
    }

    /// Exact rational value. Panics on non-finite floats.
    pub fn to_rational(&self) -> BigRational {
        match *self {
            Scalar::Float(x) => BigRational::from_float(x).expect("finite scalar"),
            Scalar::Ratio { num, den } => BigRational::new(BigInt::from(num), BigInt::from(den)),
        }
    }

    /// An interval guaranteed to contain the exact value.
    pub fn enclosure(&self) -> CertifiedInterval {
        match *self {
            Scalar::Float(x) => CertifiedInterval::point(x),
            Scalar::Ratio { .. } => {
                let v = self.value();
                if BigRational::from_float(v).as_ref() == Some(&self.to_rational()) {
                    CertifiedInterval::point(v)
                } else {
                    CertifiedInterval::new(v.next_down(), v.next_up())
                }
            }
        }
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Scalar::Float(x) => write!(f, "{x}"),
            Scalar::Ratio { num, den: 1 } => write!(f, "{num}"),
            Scalar::Ratio { num, den } => write!(f, "{num}/{den}"),
        }
    }
}

impl FromStr for Scalar {
    type Err = ParamError;

    /// Accepts `a/b`, plain decimals and scientific notation. Anything that
    /// does not fit an `i128` fraction falls back to `f64`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ParamError::Parse(s.into());
        if let Some((n, d)) = s.split_once('/') {
            let num = parse_decimal(n.trim()).ok_or_else(bad)?;
            let den = parse_decimal(d.trim()).ok_or_else(bad)?;
            if den.is_zero() {
                return Err(ParamError::ZeroDenominator);
            }
            return from_big(num / den).ok_or_else(bad);
        }
        if let Some(r) = parse_decimal(s) {
            if let Some(x) = from_big(r) {
                return Ok(x);
            }
        }
        s.parse::<f64>().map(Scalar::Float).map_err(|_| bad())
    }
}

fn from_big(r: BigRational) -> Option<Scalar> {
    let num = r.numer().to_i128()?;
    let den = r.denom().to_i128()?;
    Scalar::ratio(num, den).ok()
}

/// Parses `[-]digits[.digits][e[-]digits]` into an exact rational.
fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    if exp.unsigned_abs() > 4000 {
        return None;
    }
    let mut digits = alloc::string::String::with_capacity(int.len() + frac.len());
    digits.push_str(int);
    digits.push_str(frac);
    let mut num: BigInt = digits.parse().ok()?;
    if neg {
        num = -num;
    }
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(r)
}

/// Growth rate `lambda > 0` and per-individual survival probability
/// `0 < p < 1`. The catastrophe rate is fixed to 1 and every process starts
/// from one colony holding one individual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    lambda: Scalar,
    p: Scalar,
}

impl ModelParams {
    pub fn new(lambda: impl Into<Scalar>, p: impl Into<Scalar>) -> Result<Self, ParamError> {
        let lambda = lambda.into();
        let p = p.into();
        let lv = lambda.value();
        let pv = p.value();
        if !lv.is_finite() || !pv.is_finite() {
            return Err(if lv.is_finite() {
                ParamError::Probability(pv)
            } else {
                ParamError::Lambda(lv)
            });
        }
        let zero = BigRational::zero();
        let one = BigRational::from_integer(1.into());
        if lambda.to_rational() <= zero {
            return Err(ParamError::Lambda(lv));
        }
        let pr = p.to_rational();
        if pr <= zero || pr >= one {
            return Err(ParamError::Probability(pv));
        }
        Ok(ModelParams { lambda, p })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda.value()
    }

    pub fn p(&self) -> f64 {
        self.p.value()
    }

    pub fn lambda_scalar(&self) -> Scalar {
        self.lambda
    }

    pub fn p_scalar(&self) -> Scalar {
        self.p
    }
}
