//! Exact rational scalars.
//!
//! `Rat` is a thin wrapper over an arbitrary-precision rational kept in
//! canonical form: lowest terms, positive denominator, zero stored as `0/1`.
//! Equality is therefore structural. The JSON encoding is the string
//! `"p/q"`, shortened to `"p"` when the denominator is one.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number in canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    /// Builds `num/den`, reducing to canonical form. Fails on zero denominator.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(Rat(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidInput("division by zero".into()));
        }
        Ok(Rat(self.0.recip()))
    }

    /// Rational square root, if one exists.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.0.is_negative() {
            return None;
        }
        let ns = self.numerator().sqrt();
        let ds = self.denominator().sqrt();
        if &(&ns * &ns) == self.numerator() && &(&ds * &ds) == self.denominator() {
            Some(Rat(BigRational::new(ns, ds)))
        } else {
            None
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |_| Error::InvalidInput(format!("malformed rational {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let num = BigInt::from_str(n.trim()).map_err(bad)?;
                let den = BigInt::from_str(d.trim()).map_err(bad)?;
                if den.is_zero() {
                    return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
                }
                Ok(Rat(BigRational::new(num, den)))
            }
            None => {
                let num = BigInt::from_str(s.trim()).map_err(bad)?;
                Ok(Rat(BigRational::from_integer(num)))
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rat(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Rat> for &Rat {
    type Output = Rat;
    fn div(self, rhs: &'a Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rat(&self.0 / &rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

/// Shorthand used pervasively in tests: `rat(1, 2)` is `1/2`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num, den).expect("nonzero denominator")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_is_structural() {
        assert_eq!(rat(2, 4), rat(1, 2));
        assert_eq!(rat(-1, -2), rat(1, 2));
        assert_eq!(rat(1, -2), rat(-1, 2));
        assert_eq!(rat(0, 5), Rat::zero());
        assert!(rat(3, -3).denominator() > &num_bigint::BigInt::from(0));
    }

    #[test]
    fn display_and_parse_round_trip() {
        for s in ["0", "7", "-3", "1/2", "-5/7"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        // non-canonical input normalizes
        assert_eq!("4/6".parse::<Rat>().unwrap().to_string(), "2/3");
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn arithmetic() {
        assert_eq!(rat(1, 2) + rat(1, 3), rat(5, 6));
        assert_eq!(rat(1, 2) * rat(2, 3), rat(1, 3));
        assert_eq!(rat(1, 2) - rat(1, 2), Rat::zero());
        assert_eq!(rat(3, 4) / rat(3, 2), rat(1, 2));
        assert_eq!(rat(4, 9).sqrt_exact(), Some(rat(2, 3)));
        assert_eq!(rat(1, 2).sqrt_exact(), None);
        assert_eq!(rat(-1, 4).sqrt_exact(), None);
    }

    #[test]
    fn json_encoding() {
        assert_eq!(serde_json::to_string(&rat(1, 2)).unwrap(), "\"1/2\"");
        assert_eq!(serde_json::to_string(&rat(5, 1)).unwrap(), "\"5\"");
        let r: Rat = serde_json::from_str("\"-7/3\"").unwrap();
        assert_eq!(r, rat(-7, 3));
    }
}
