//! Exact rational arithmetic for the quantities the test suite pins with
//! zero tolerance: σ values, min-entropy-rate formulas, and statistical
//! distances of flat sources.
//!
//! Numerators and denominators stay within `i128`; the desk-scale quantities
//! handled here (pair counts up to the pair cap, rate fractions with tiny
//! denominators) never come close to overflowing it.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A reduced fraction `num/den` with `den > 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i128,
    den: i128,
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    /// Builds `num/den`, reduced, with the sign carried by the numerator.
    ///
    /// Panics if `den == 0`.
    pub fn new(num: i128, den: i128) -> Rational {
        assert!(den != 0, "rational with zero denominator");
        let sign = if (num < 0) != (den < 0) { -1 } else { 1 };
        let (num, den) = (num.unsigned_abs(), den.unsigned_abs());
        let g = gcd(num, den).max(1);
        Rational {
            num: sign * (num / g) as i128,
            den: (den / g) as i128,
        }
    }

    pub fn from_integer(n: i128) -> Rational {
        Rational { num: n, den: 1 }
    }

    pub fn num(&self) -> i128 {
        self.num
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn add(&self, other: &Rational) -> Rational {
        Rational::new(
            checked(self.num.checked_mul(other.den)) + checked(other.num.checked_mul(self.den)),
            checked(self.den.checked_mul(other.den)),
        )
    }

    pub fn sub(&self, other: &Rational) -> Rational {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Rational) -> Rational {
        Rational::new(
            checked(self.num.checked_mul(other.num)),
            checked(self.den.checked_mul(other.den)),
        )
    }

    /// Panics if `other` is zero.
    pub fn div(&self, other: &Rational) -> Rational {
        assert!(other.num != 0, "division by zero rational");
        Rational::new(
            checked(self.num.checked_mul(other.den)),
            checked(self.den.checked_mul(other.num)),
        )
    }

    pub fn neg(&self) -> Rational {
        Rational {
            num: -self.num,
            den: self.den,
        }
    }

    pub fn abs(&self) -> Rational {
        Rational {
            num: self.num.abs(),
            den: self.den,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn checked(v: Option<i128>) -> i128 {
    v.expect("rational arithmetic overflowed i128")
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Rational) -> Ordering {
        // Denominators are positive, so cross-multiplication preserves order.
        checked(self.num.checked_mul(other.den)).cmp(&checked(other.num.checked_mul(self.den)))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rational {
    type Err = String;

    /// Parses `"a/b"` or a bare integer `"a"`.
    fn from_str(s: &str) -> Result<Rational, String> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (
                n.trim().parse::<i128>().map_err(|e| e.to_string())?,
                d.trim().parse::<i128>().map_err(|e| e.to_string())?,
            ),
            None => (s.parse::<i128>().map_err(|e| e.to_string())?, 1),
        };
        if den == 0 {
            return Err("zero denominator".to_string());
        }
        Ok(Rational::new(num, den))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_normalizes_sign() {
        assert_eq!(Rational::new(2, 4), Rational::new(1, 2));
        assert_eq!(Rational::new(-3, -6), Rational::new(1, 2));
        assert_eq!(Rational::new(3, -6), Rational::new(-1, 2));
        assert_eq!(Rational::new(0, 7), Rational::ZERO);
    }

    #[test]
    fn arithmetic() {
        let a = Rational::new(1, 2);
        let b = Rational::new(1, 3);
        assert_eq!(a.add(&b), Rational::new(5, 6));
        assert_eq!(a.sub(&b), Rational::new(1, 6));
        assert_eq!(a.mul(&b), Rational::new(1, 6));
        assert_eq!(a.div(&b), Rational::new(3, 2));
        assert_eq!(a.neg().abs(), a);
    }

    #[test]
    fn ordering_by_cross_multiplication() {
        // the improved rates order downward: 3/8 < 123/260 < 21/44 < 1/2
        assert!(Rational::new(3, 8) < Rational::new(123, 260));
        assert!(Rational::new(123, 260) < Rational::new(21, 44));
        assert!(Rational::new(21, 44) < Rational::new(1, 2));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("17/7".parse::<Rational>().unwrap(), Rational::new(17, 7));
        assert_eq!("2".parse::<Rational>().unwrap(), Rational::from_integer(2));
        assert_eq!(Rational::new(21, 44).to_string(), "21/44");
        assert!(" 1/0 ".parse::<Rational>().is_err());
    }
}
