use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, parse_rational, to_f64, Rational};
use super::ArithError;

/// An element of Q(i): `re + i*im` with exact rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn imag(im: Rational) -> Self {
        Self { re: Rational::zero(), im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(Rational::from_integer(re.into()), Rational::from_integer(im.into()))
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_imaginary(&self) -> bool {
        self.re.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    /// `re^2 + im^2`, exact.
    pub fn abs_squared(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self, ArithError> {
        let n = self.abs_squared();
        if n.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::new(&self.re / &n, -&self.im / &n))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ArithError> {
        if rhs.im.is_zero() {
            if rhs.re.is_zero() {
                return Err(ArithError::DivisionByZero);
            }
            return Ok(Self::new(&self.re / &rhs.re, &self.im / &rhs.re));
        }
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(&self.re * r, &self.im * r)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }

    /// Modulus as a float; for reporting only.
    pub fn abs_f64(&self) -> f64 {
        let (a, b) = self.to_f64_pair();
        a.hypot(b)
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::new(Rational::one(), Rational::zero())
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        Self::real(r)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_ints(n, 0)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: GaussianRational) -> GaussianRational {
        GaussianRational::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: GaussianRational) -> GaussianRational {
        GaussianRational::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        // Skip the cross terms when either side is purely real or purely imaginary;
        // that is the common case and saves half the big-number work.
        match (self.im.is_zero(), rhs.im.is_zero()) {
            (true, true) => GaussianRational::real(&self.re * &rhs.re),
            (true, false) => GaussianRational::new(&self.re * &rhs.re, &self.re * &rhs.im),
            (false, true) => GaussianRational::new(&self.re * &rhs.re, &self.im * &rhs.re),
            (false, false) => {
                if self.re.is_zero() && rhs.re.is_zero() {
                    return GaussianRational::real(-(&self.im * &rhs.im));
                }
                GaussianRational::new(
                    &self.re * &rhs.re - &self.im * &rhs.im,
                    &self.re * &rhs.im + &self.im * &rhs.re,
                )
            }
        }
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: GaussianRational) -> GaussianRational {
        &self * &rhs
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-&self.re, -&self.im)
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        if !rhs.re.is_zero() {
            self.re += &rhs.re;
        }
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        if !rhs.re.is_zero() {
            self.re -= &rhs.re;
        }
        if !rhs.im.is_zero() {
            self.im -= &rhs.im;
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im < Rational::zero() {
                    write!(f, "{} - {}i", self.re, -&self.im)
                } else {
                    write!(f, "{} + {}i", self.re, self.im)
                }
            }
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct GaussianText {
    re: String,
    im: String,
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GaussianText { re: format_rational(&self.re), im: format_rational(&self.im) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let t = GaussianText::deserialize(d)?;
        let re = parse_rational(&t.re).map_err(serde::de::Error::custom)?;
        let im = parse_rational(&t.im).map_err(serde::de::Error::custom)?;
        Ok(Self::new(re, im))
    }
}

/// Serde adapter for a bare [`Rational`] stored as its canonical string.
pub mod rational_text {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let t = String::deserialize(d)?;
        parse_rational(&t).map_err(serde::de::Error::custom)
    }
}
