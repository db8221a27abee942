//! Laurent polynomials with Gaussian integer coefficients.
//!
//! Exact factors of long truncations carry rationals of thousands of bits, and
//! reducing every intermediate fraction dominates the running time. Products
//! and identity checks are therefore done over a common denominator, where the
//! only work is integer multiplication.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{LaurentMatrix2, LaurentScalar};
use crate::arith::{GaussianRational, Rational};

/// Gaussian integer `re + i im`.
pub(crate) type GaussInt = (BigInt, BigInt);

pub(crate) fn gmul(a: &GaussInt, b: &GaussInt) -> GaussInt {
    let mut re = BigInt::zero();
    let mut im = BigInt::zero();
    if !a.0.is_zero() && !b.0.is_zero() {
        re += &a.0 * &b.0;
    }
    if !a.1.is_zero() && !b.1.is_zero() {
        re -= &a.1 * &b.1;
    }
    if !a.0.is_zero() && !b.1.is_zero() {
        im += &a.0 * &b.1;
    }
    if !a.1.is_zero() && !b.0.is_zero() {
        im += &a.1 * &b.0;
    }
    (re, im)
}

pub(crate) fn is_zero_gi(a: &GaussInt) -> bool {
    a.0.is_zero() && a.1.is_zero()
}

fn zero_gi() -> GaussInt {
    (BigInt::zero(), BigInt::zero())
}

/// Least common multiple of every coefficient denominator.
pub(crate) fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a LaurentScalar>) -> BigInt {
    let mut den = BigInt::one();
    for x in xs {
        for c in x.coeffs() {
            for r in [&c.re, &c.im] {
                if !r.denom().is_one() && !(&den % r.denom()).is_zero() {
                    den = den.lcm(r.denom());
                }
            }
        }
    }
    den
}

/// Lowest power first, trimmed at both ends; zero is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IntPoly {
    pub pmin: i64,
    pub coeffs: Vec<GaussInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        Self { pmin: 0, coeffs: Vec::new() }
    }

    pub fn constant(c: GaussInt) -> Self {
        Self::trimmed(0, vec![c])
    }

    pub fn trimmed(mut pmin: i64, mut coeffs: Vec<GaussInt>) -> Self {
        while coeffs.last().is_some_and(is_zero_gi) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| is_zero_gi(c)).count();
        coeffs.drain(..lead);
        pmin += lead as i64;
        if coeffs.is_empty() {
            pmin = 0;
        }
        Self { pmin, coeffs }
    }

    /// `den * x`, which must have integer parts.
    pub fn scaled_from(x: &LaurentScalar, den: &BigInt) -> Self {
        let int = |r: &Rational| if r.is_zero() { BigInt::zero() } else { r.numer() * (den / r.denom()) };
        Self { pmin: x.pmin(), coeffs: x.coeffs().iter().map(|c| (int(&c.re), int(&c.im))).collect() }
    }

    /// `self / den` as a reduced rational polynomial.
    pub fn over(&self, den: &BigInt) -> LaurentScalar {
        let q = |v: &BigInt| if v.is_zero() { Rational::zero() } else { Rational::new(v.clone(), den.clone()) };
        let coeffs = self.coeffs.iter().map(|(re, im)| GaussianRational::new(q(re), q(im))).collect();
        LaurentScalar::from_coeffs(self.pmin, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.pmin + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, k: i64) -> GaussInt {
        let j = k - self.pmin;
        if j < 0 || j as usize >= self.coeffs.len() {
            return zero_gi();
        }
        self.coeffs[j as usize].clone()
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        let coeffs = self.coeffs.iter().map(|(re, im)| (re * k, im * k)).collect();
        Self::trimmed(self.pmin, coeffs)
    }

    /// `ca * self - cb * t^s * b`.
    pub fn cross(&self, ca: &GaussInt, b: &IntPoly, cb: &GaussInt, s: i64) -> Self {
        let ends = [self.degree().map(|d| (self.pmin, d)), b.degree().map(|d| (b.pmin + s, d + s))];
        let Some((lo, hi)) = ends.into_iter().flatten().reduce(|x, y| (x.0.min(y.0), x.1.max(y.1))) else {
            return Self::zero();
        };
        let mut acc = vec![zero_gi(); (hi - lo + 1) as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !is_zero_gi(c) {
                let t = gmul(ca, c);
                let slot = &mut acc[(self.pmin + j as i64 - lo) as usize];
                slot.0 += t.0;
                slot.1 += t.1;
            }
        }
        for (j, c) in b.coeffs.iter().enumerate() {
            if !is_zero_gi(c) {
                let t = gmul(cb, c);
                let slot = &mut acc[(b.pmin + s + j as i64 - lo) as usize];
                slot.0 -= t.0;
                slot.1 -= t.1;
            }
        }
        Self::trimmed(lo, acc)
    }

    pub fn sub(&self, rhs: &IntPoly) -> Self {
        let one = (BigInt::one(), BigInt::zero());
        self.cross(&one, rhs, &one, 0)
    }

    pub fn mul(&self, rhs: &IntPoly) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut acc = vec![zero_gi(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if is_zero_gi(x) {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if !is_zero_gi(y) {
                    let t = gmul(x, y);
                    acc[i + j].0 += t.0;
                    acc[i + j].1 += t.1;
                }
            }
        }
        Self::trimmed(self.pmin + rhs.pmin, acc)
    }
}

/// A Laurent matrix as integer entries over one denominator.
pub(crate) struct IntMatrix {
    pub entries: [[IntPoly; 2]; 2],
    pub den: BigInt,
}

impl IntMatrix {
    pub fn from_matrix(m: &LaurentMatrix2) -> Self {
        let den = common_denominator(m.entries.iter().flatten());
        let entries = std::array::from_fn(|i| std::array::from_fn(|j| IntPoly::scaled_from(&m.entries[i][j], &den)));
        Self { entries, den }
    }

    /// Numerator of the determinant; the determinant itself is this over `den^2`.
    pub fn det_numerator(&self) -> IntPoly {
        let e = &self.entries;
        e[0][0].mul(&e[1][1]).sub(&e[0][1].mul(&e[1][0]))
    }

    /// Numerator of the product, over `self.den * rhs.den`.
    pub fn mul_numerator(&self, rhs: &IntMatrix) -> [[IntPoly; 2]; 2] {
        let (a, b) = (&self.entries, &rhs.entries);
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let x = a[i][0].mul(&b[0][j]);
                let y = a[i][1].mul(&b[1][j]);
                let minus_one = (-BigInt::one(), BigInt::zero());
                let one = (BigInt::one(), BigInt::zero());
                x.cross(&one, &y, &minus_one, 0)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_product() {
        let x = LaurentScalar::from_coeffs(-1, vec![GaussianRational::from_ints(1, 2), GaussianRational::real(Rational::new(1.into(), 6.into()))]);
        let y = LaurentScalar::from_coeffs(2, vec![GaussianRational::imag(Rational::new(3.into(), 4.into())), GaussianRational::from_ints(-1, 0)]);
        let dx = common_denominator([&x]);
        let dy = common_denominator([&y]);
        assert_eq!(dx, BigInt::from(6));
        let p = IntPoly::scaled_from(&x, &dx).mul(&IntPoly::scaled_from(&y, &dy));
        assert_eq!(p.over(&(&dx * &dy)), &x * &y);
        assert_eq!(IntPoly::scaled_from(&x, &dx).over(&dx), x);
    }
}
