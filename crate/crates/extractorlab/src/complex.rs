//! Double-precision complex accumulator for character sums.

use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// A complex number used to accumulate additive-character sums.
///
/// Magnitudes stay bounded by the number of summed unit-modulus terms, so
/// `f64` components are ample at desk scale.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexAmplitude {
    pub re: f64,
    pub im: f64,
}

impl ComplexAmplitude {
    pub const ZERO: ComplexAmplitude = ComplexAmplitude { re: 0.0, im: 0.0 };
    pub const ONE: ComplexAmplitude = ComplexAmplitude { re: 1.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> ComplexAmplitude {
        ComplexAmplitude { re, im }
    }

    pub fn from_polar(radius: f64, angle: f64) -> ComplexAmplitude {
        ComplexAmplitude::new(radius * angle.cos(), radius * angle.sin())
    }

    pub fn conj(&self) -> ComplexAmplitude {
        ComplexAmplitude::new(self.re, -self.im)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, factor: f64) -> ComplexAmplitude {
        ComplexAmplitude::new(self.re * factor, self.im * factor)
    }
}

impl Add for ComplexAmplitude {
    type Output = ComplexAmplitude;
    fn add(self, rhs: ComplexAmplitude) -> ComplexAmplitude {
        ComplexAmplitude::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl AddAssign for ComplexAmplitude {
    fn add_assign(&mut self, rhs: ComplexAmplitude) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for ComplexAmplitude {
    type Output = ComplexAmplitude;
    fn sub(self, rhs: ComplexAmplitude) -> ComplexAmplitude {
        ComplexAmplitude::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl SubAssign for ComplexAmplitude {
    fn sub_assign(&mut self, rhs: ComplexAmplitude) {
        self.re -= rhs.re;
        self.im -= rhs.im;
    }
}

impl Mul for ComplexAmplitude {
    type Output = ComplexAmplitude;
    fn mul(self, rhs: ComplexAmplitude) -> ComplexAmplitude {
        ComplexAmplitude::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Neg for ComplexAmplitude {
    type Output = ComplexAmplitude;
    fn neg(self) -> ComplexAmplitude {
        ComplexAmplitude::new(-self.re, -self.im)
    }
}

impl Sum for ComplexAmplitude {
    fn sum<I: Iterator<Item = ComplexAmplitude>>(iter: I) -> ComplexAmplitude {
        iter.fold(ComplexAmplitude::ZERO, |acc, z| acc + z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_spot_check() {
        let a = ComplexAmplitude::new(1.0, 2.0);
        let b = ComplexAmplitude::new(-0.5, 3.0);
        assert_eq!(a + b, b + a);
        assert_eq!(a * b, b * a);
        assert_eq!(a - a, ComplexAmplitude::ZERO);
        assert_eq!((a * b).conj(), a.conj() * b.conj());
    }

    #[test]
    fn polar_unit_modulus() {
        let z = ComplexAmplitude::from_polar(1.0, 1.234);
        assert!((z.norm() - 1.0).abs() < 1e-12);
    }
}
