//! Scalar abstraction over `f64` and exact rationals.
//!
//! Polynomial and transfer-matrix code is generic over [`Scalar`] so the same
//! routines run in floating point (measured data) and in exact rational
//! arithmetic (round-trip tests, continued-fraction peeling).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Field operations needed by the generic kernels.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True when arithmetic is exact (no rounding).
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// Lossless lift into exact rationals (every finite float is one).
    fn to_rat(&self) -> Rat;
    /// Conversion back from exact rationals (rounds for floats).
    fn from_rat(r: &Rat) -> Self;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_rat(&self) -> Rat {
        Rat(BigRational::from_float(*self).expect("finite float"))
    }
    fn from_rat(r: &Rat) -> Self {
        Scalar::to_f64(r)
    }
}

/// Arbitrary-precision rational number.
///
/// Thin wrapper around [`num_rational::BigRational`] with the `p/q` string
/// format used in JSON artifacts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(r: BigRational) -> Self {
        Rat(r)
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn recip(&self) -> Self {
        assert!(!self.0.is_zero(), "reciprocal of zero");
        Rat(self.0.recip())
    }

    /// Nearest multiple of `2^-bits`; bounds coefficient growth in iterative
    /// exact refinements.
    pub fn dyadic_round(&self, bits: u32) -> Rat {
        let scale = BigRational::from_integer(BigInt::from(1) << bits);
        Rat((&self.0 * &scale).round() / scale)
    }
}

impl Scalar for Rat {
    const EXACT: bool = true;

    fn zero() -> Self {
        Rat(BigRational::zero())
    }
    fn one() -> Self {
        Rat(BigRational::one())
    }
    fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn abs(&self) -> Self {
        Rat(self.0.abs())
    }
    fn to_f64(&self) -> f64 {
        // Falls back to a quotient of lossy conversions for very large parts.
        self.0
            .to_f64()
            .unwrap_or_else(|| self.0.numer().to_f64().unwrap_or(f64::NAN) / self.0.denom().to_f64().unwrap_or(f64::NAN))
    }
    fn to_rat(&self) -> Rat {
        self.clone()
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = String;

    /// Parses `p`, `p/q`, or a plain integer-valued decimal.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let n: BigInt = num.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
            let d: BigInt = den.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
            if d.is_zero() {
                return Err("zero denominator".into());
            }
            Ok(Rat(BigRational::new(n, d)))
        } else {
            let n: BigInt = s.parse().map_err(|e| format!("bad rational: {e}"))?;
            Ok(Rat(BigRational::from_integer(n)))
        }
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);
rat_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rat_roundtrips_through_string() {
        let r = Rat::new(-3, 12);
        assert_eq!(r.to_string(), "-1/4");
        assert_eq!("-1/4".parse::<Rat>().unwrap(), r);
        assert_eq!("7".parse::<Rat>().unwrap(), Rat::from_int(7));
    }

    #[test]
    fn rat_arithmetic() {
        let a = Rat::new(1, 3);
        let b = Rat::new(1, 6);
        assert_eq!(a.clone() + b.clone(), Rat::new(1, 2));
        assert_eq!(a.clone() * b.clone(), Rat::new(1, 18));
        assert_eq!(a.clone() / b, Rat::from_int(2));
        assert_eq!((-a).to_f64(), -1.0 / 3.0);
    }
}
