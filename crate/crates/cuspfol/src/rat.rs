//! Exact rational scalars.
//!
//! `Rat` wraps an arbitrary-precision rational kept in lowest terms. It is
//! the coefficient field for every polynomial in the crate unless a simple
//! algebraic extension is explicitly requested (see [`crate::ext`]).
//!
//! Textual convention, shared by the parser and every printer: integers
//! render without a denominator (`-3`), everything else as `numer/denom`
//! in lowest terms (`-3/2`). No spaces inside a literal.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number, always in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    /// `n/d`. Panics if `d == 0`.
    pub fn new(n: i64, d: i64) -> Self {
        assert!(d != 0, "rational with zero denominator");
        Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// The integer `n` as a rational.
    pub fn int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_big(r: BigRational) -> Self {
        Rat(r)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Rat> {
        if self.is_zero() {
            None
        } else {
            Some(Rat(self.0.recip()))
        }
    }

    /// Largest integer `<= self`, as an exact rational.
    pub fn floor(&self) -> Rat {
        Rat(self.0.floor())
    }

    /// Smallest integer `>= self`, as an exact rational.
    pub fn ceil(&self) -> Rat {
        Rat(self.0.ceil())
    }

    /// Exact value as `i64` when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    /// Integer power (negative exponents invert; panics on `0^-k`).
    pub fn pow(&self, e: i32) -> Rat {
        if e < 0 {
            assert!(!self.is_zero(), "zero to a negative power");
        }
        Rat(num_traits::Pow::pow(&self.0, e))
    }
}

impl fmt::Display for Rat {
    // BigRational already renders `numer/denom`, or bare `numer` when the
    // denominator is one; that is exactly the crate-wide convention.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Rat {
    type Err = String;

    /// Accepts an optional leading `-`, digits, and an optional `/digits`
    /// part: `"4"`, `"-1"`, `"3/2"`, `"-3/2"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let numer =
            BigInt::from_str(num_str.trim()).map_err(|_| format!("bad numerator in `{s}`"))?;
        let denom = match den_str {
            Some(d) => BigInt::from_str(d.trim()).map_err(|_| format!("bad denominator in `{s}`"))?,
            None => BigInt::one(),
        };
        if denom.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        Ok(Rat(BigRational::new(numer, denom)))
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
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div<&Rat> for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
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

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_matches_convention() {
        assert_eq!(Rat::new(3, 2).to_string(), "3/2");
        assert_eq!(Rat::new(-3, 2).to_string(), "-3/2");
        assert_eq!(Rat::new(4, 2).to_string(), "2");
        assert_eq!(Rat::int(-7).to_string(), "-7");
        assert_eq!(Rat::zero().to_string(), "0");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "4", "-1", "3/2", "-3/2", "22/7"] {
            assert_eq!(Rat::from_str(s).unwrap().to_string(), s);
        }
        assert_eq!(Rat::from_str("6/4").unwrap(), Rat::new(3, 2));
        assert!(Rat::from_str("1/0").is_err());
        assert!(Rat::from_str("x").is_err());
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = Rat::new(1, 3);
        let b = Rat::new(1, 6);
        assert_eq!(&a + &b, Rat::new(1, 2));
        assert_eq!(&a - &b, Rat::new(1, 6));
        assert_eq!(&a * &b, Rat::new(1, 18));
        assert_eq!(&a / &b, Rat::int(2));
        assert_eq!(a.recip().unwrap(), Rat::int(3));
        assert!(Rat::zero().recip().is_none());
    }

    #[test]
    fn powers_and_rounding() {
        assert_eq!(Rat::new(3, 2).pow(2), Rat::new(9, 4));
        assert_eq!(Rat::new(3, 2).pow(-1), Rat::new(2, 3));
        assert_eq!(Rat::new(7, 2).floor(), Rat::int(3));
        assert_eq!(Rat::new(7, 2).ceil(), Rat::int(4));
        assert_eq!(Rat::new(-7, 2).ceil(), Rat::int(-3));
        assert_eq!(Rat::new(10, 5).to_i64(), Some(2));
        assert_eq!(Rat::new(1, 2).to_i64(), None);
    }
}
