//! Scalars that stay exact as long as possible.
//!
//! An exact scalar is `coef * sqrt(rad)` with rational `coef` and `rad > 0`.
//! This covers every rational number plus the square roots that appear when a
//! length is computed from rational coordinates. Anything that leaves that set
//! (a sum of unlike surds, a fourth root) degrades to `f64`.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative value")]
    NegativeSqrt,
    #[error("non-finite floating-point result")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surd {
    coef: BigRational,
    rad: BigRational,
}

impl Surd {
    fn new(coef: BigRational, rad: BigRational) -> Surd {
        debug_assert!(rad.is_positive());
        if coef.is_zero() {
            return Surd { coef, rad: BigRational::one() };
        }
        match rational_sqrt(&rad) {
            Some(root) => Surd { coef: coef * root, rad: BigRational::one() },
            None => Surd { coef, rad },
        }
    }

    fn rational(r: BigRational) -> Surd {
        Surd { coef: r, rad: BigRational::one() }
    }

    pub fn is_rational(&self) -> bool {
        self.rad.is_one()
    }

    fn square(&self) -> BigRational {
        &self.coef * &self.coef * &self.rad
    }

    fn to_f64(&self) -> f64 {
        let c = self.coef.to_f64().unwrap_or(f64::NAN);
        if self.rad.is_one() {
            c
        } else {
            c * self.rad.to_f64().unwrap_or(f64::NAN).sqrt()
        }
    }

    fn try_add(&self, other: &Surd) -> Option<Surd> {
        if self.coef.is_zero() {
            return Some(other.clone());
        }
        if other.coef.is_zero() {
            return Some(self.clone());
        }
        if self.rad == other.rad {
            return Some(Surd::new(&self.coef + &other.coef, self.rad.clone()));
        }
        // sqrt(a) = sqrt(a/b) * sqrt(b) when a/b is a rational square
        let q = &self.rad / &other.rad;
        let root = rational_sqrt(&q)?;
        Some(Surd::new(&self.coef * root + &other.coef, other.rad.clone()))
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = int_sqrt(r.numer())?;
    let d = int_sqrt(r.denom())?;
    Some(BigRational::new(n, d))
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    let s = n.sqrt();
    if &s * &s == *n {
        Some(s)
    } else {
        None
    }
}

#[derive(Debug, Clone)]
pub enum Scalar {
    Exact(Surd),
    Float(f64),
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Exact(Surd::rational(BigRational::zero()))
    }

    pub fn from_rational(r: BigRational) -> Scalar {
        Scalar::Exact(Surd::rational(r))
    }

    pub fn from_int(i: i64) -> Scalar {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(i)))
    }

    pub fn from_f64(f: f64) -> Scalar {
        Scalar::Float(f)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(s) if s.is_rational() => Some(&s.coef),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(s) => s.to_f64(),
            Scalar::Float(f) => *f,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(s) => s.coef.is_zero(),
            Scalar::Float(f) => *f == 0.0,
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Scalar::Exact(s) => {
                if s.coef.is_zero() {
                    0
                } else if s.coef.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Scalar::Float(f) => {
                if *f == 0.0 {
                    0
                } else if *f > 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(s) => Scalar::Exact(Surd { coef: -&s.coef, rad: s.rad.clone() }),
            Scalar::Float(f) => Scalar::Float(-f),
        }
    }

    pub fn abs(&self) -> Scalar {
        if self.signum() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        if let (Scalar::Exact(a), Scalar::Exact(b)) = (self, other) {
            if let Some(s) = a.try_add(b) {
                return Scalar::Exact(s);
            }
        }
        Scalar::Float(self.to_f64() + other.to_f64())
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                Scalar::Exact(Surd::new(&a.coef * &b.coef, &a.rad * &b.rad))
            }
            _ => Scalar::Float(self.to_f64() * other.to_f64()),
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, NumError> {
        if other.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                Ok(Scalar::Exact(Surd::new(&a.coef / &b.coef, &a.rad / &b.rad)))
            }
            _ => finite(self.to_f64() / other.to_f64()),
        }
    }

    pub fn square(&self) -> Scalar {
        match self {
            Scalar::Exact(s) => Scalar::from_rational(s.square()),
            Scalar::Float(f) => Scalar::Float(f * f),
        }
    }

    pub fn sqrt(&self) -> Result<Scalar, NumError> {
        if self.signum() < 0 {
            return Err(NumError::NegativeSqrt);
        }
        match self {
            Scalar::Exact(s) if s.is_rational() => {
                if s.coef.is_zero() {
                    Ok(Scalar::zero())
                } else {
                    Ok(Scalar::Exact(Surd::new(BigRational::one(), s.coef.clone())))
                }
            }
            _ => finite(self.to_f64().sqrt()),
        }
    }

    /// Square root that tolerates tiny negative float noise.
    pub fn sqrt_clamped(&self, tol: f64) -> Result<Scalar, NumError> {
        match self {
            Scalar::Float(f) if *f < 0.0 && *f > -tol => Ok(Scalar::Float(0.0)),
            _ => self.sqrt(),
        }
    }

    /// Exact equality when both sides are exact; `None` otherwise.
    pub fn exact_eq(&self, other: &Scalar) -> Option<bool> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                Some(self.signum() == other.signum() && a.square() == b.square())
            }
            _ => None,
        }
    }

    /// Relative difference `|a - b| / max(|a|, |b|)`, zero when both vanish.
    /// Exact inputs that are equal give exactly zero.
    pub fn rel_diff(&self, other: &Scalar) -> f64 {
        if self.exact_eq(other) == Some(true) {
            return 0.0;
        }
        let (a, b) = (self.to_f64(), other.to_f64());
        let scale = a.abs().max(b.abs());
        if scale == 0.0 {
            0.0
        } else {
            (a - b).abs() / scale
        }
    }
}

fn finite(f: f64) -> Result<Scalar, NumError> {
    if f.is_finite() {
        Ok(Scalar::Float(f))
    } else {
        Err(NumError::NonFinite)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(s) if s.is_rational() => write!(f, "{}", s.coef),
            Scalar::Exact(s) if s.coef.is_one() => write!(f, "sqrt({})", s.rad),
            Scalar::Exact(s) => write!(f, "{}*sqrt({})", s.coef, s.rad),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Parses `3`, `-2`, `1/2`, `0.125` or `2.5e-3` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
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
    let all: String = format!("{int_part}{frac_part}");
    let mut n: BigInt = all.parse().ok()?;
    if neg {
        n = -n;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        BigRational::from_integer(n * num::pow(ten, scale as usize))
    } else {
        BigRational::new(n, num::pow(ten, (-scale) as usize))
    };
    Some(r)
}

pub fn rational_to_string(r: &BigRational) -> String {
    r.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_rational(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn sqrt_of_square_is_rational() {
        let s = q(9, 4).sqrt().unwrap();
        assert_eq!(s.as_rational(), Some(&BigRational::new(3.into(), 2.into())));
    }

    #[test]
    fn surds_stay_exact_through_products() {
        // sqrt(29)/2 squared is 29/4
        let od = q(29, 4).sqrt().unwrap();
        assert!(od.is_exact());
        assert_eq!(od.square().as_rational(), Some(&BigRational::new(29.into(), 4.into())));
        let r = od.div(&od).unwrap();
        assert_eq!(r.as_rational(), Some(&BigRational::one()));
    }

    #[test]
    fn like_surds_add_exactly() {
        let a = q(2, 1).sqrt().unwrap(); // sqrt 2
        let b = q(8, 1).sqrt().unwrap(); // 2 sqrt 2
        let s = a.add(&b);
        assert!(s.is_exact());
        assert_eq!(s.square().as_rational(), Some(&BigRational::from_integer(18.into())));
    }

    #[test]
    fn unlike_surds_degrade_to_float() {
        let s = q(2, 1).sqrt().unwrap().add(&q(3, 1).sqrt().unwrap());
        assert!(!s.is_exact());
        assert!((s.to_f64() - (2f64.sqrt() + 3f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert_eq!(q(1, 1).div(&Scalar::zero()).unwrap_err(), NumError::DivisionByZero);
        assert_eq!(q(-1, 1).sqrt().unwrap_err(), NumError::NegativeSqrt);
    }

    #[test]
    fn rel_diff_exact_zero() {
        let a = q(29, 4).sqrt().unwrap();
        let b = q(29, 1).sqrt().unwrap().div(&q(2, 1)).unwrap();
        assert_eq!(a.rel_diff(&b), 0.0);
    }

    #[test]
    fn parse_forms() {
        let r = |s| parse_rational(s).map(|r| r.to_string());
        assert_eq!(r("3").as_deref(), Some("3"));
        assert_eq!(r("1/2").as_deref(), Some("1/2"));
        assert_eq!(r("0.125").as_deref(), Some("1/8"));
        assert_eq!(r("-2.5e-1").as_deref(), Some("-1/4"));
        assert_eq!(r("1e-9").as_deref(), Some("1/1000000000"));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("abc").is_none());
        assert!(parse_rational(".").is_none());
    }
}
