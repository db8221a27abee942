use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::intpoly::{common_denominator, IntPoly};
use crate::arith::{GaussianRational, Rational};

/// A Laurent polynomial over Q(i), stored densely from its lowest power upward.
///
/// Always canonical: no zero coefficients at either end, and the zero
/// polynomial is the empty vector with `pmin = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentScalar {
    pmin: i64,
    coeffs: Vec<GaussianRational>,
}

impl LaurentScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * t^k`.
    pub fn monomial(c: GaussianRational, k: i64) -> Self {
        Self::from_coeffs(k, vec![c])
    }

    /// `t^k`.
    pub fn power(k: i64) -> Self {
        Self::monomial(GaussianRational::one(), k)
    }

    pub fn from_coeffs(pmin: i64, mut coeffs: Vec<GaussianRational>) -> Self {
        let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == coeffs.len() {
            return Self::zero();
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        coeffs.drain(..lead_zeros);
        Self { pmin: pmin + lead_zeros as i64, coeffs }
    }

    /// Builds from `(power, coefficient)` pairs; repeated powers are summed.
    pub fn from_terms<I: IntoIterator<Item = (i64, GaussianRational)>>(terms: I) -> Self {
        let terms: Vec<_> = terms.into_iter().collect();
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return Self::zero();
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![GaussianRational::zero(); (hi - lo + 1) as usize];
        for (k, c) in &terms {
            coeffs[(k - lo) as usize] += c;
        }
        Self::from_coeffs(lo, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn pmin(&self) -> i64 {
        self.pmin
    }

    /// Highest power with a nonzero coefficient; `None` for zero.
    pub fn pmax(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.pmin + self.coeffs.len() as i64 - 1)
        }
    }

    /// Lowest power with a nonzero coefficient; `None` for zero.
    pub fn lowest(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.pmin)
        }
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero outside the window).
    pub fn coeff(&self, k: i64) -> GaussianRational {
        let idx = k - self.pmin;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            GaussianRational::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &GaussianRational)> {
        self.coeffs.iter().enumerate().map(move |(j, c)| (self.pmin + j as i64, c)).filter(|(_, c)| !c.is_zero())
    }

    /// `(c, k)` if this is `c * t^k` with `c != 0`.
    pub fn as_monomial(&self) -> Option<(GaussianRational, i64)> {
        if self.coeffs.len() == 1 {
            Some((self.coeffs[0].clone(), self.pmin))
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<GaussianRational> {
        if self.is_zero() {
            return Some(GaussianRational::zero());
        }
        match self.as_monomial() {
            Some((c, 0)) => Some(c),
            _ => None,
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { pmin: self.pmin, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&GaussianRational::real(r.clone()))
    }

    /// Multiplies by `t^m`.
    pub fn shift(&self, m: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { pmin: self.pmin + m, coeffs: self.coeffs.clone() }
    }

    /// Keeps powers in `[lo, hi]`.
    pub fn restrict(&self, lo: i64, hi: i64) -> Self {
        if self.is_zero() || lo > hi {
            return Self::zero();
        }
        let from = lo.max(self.pmin);
        let to = hi.min(self.pmax().unwrap());
        if from > to {
            return Self::zero();
        }
        let a = (from - self.pmin) as usize;
        let b = (to - self.pmin) as usize;
        Self::from_coeffs(from, self.coeffs[a..=b].to_vec())
    }

    /// Powers `>= 0`.
    pub fn project_plus(&self) -> Self {
        self.restrict(0, i64::MAX)
    }

    /// Powers `<= 0`.
    pub fn project_minus(&self) -> Self {
        self.restrict(i64::MIN, 0)
    }

    /// Powers `<= -1`.
    pub fn project_minus_zero(&self) -> Self {
        self.restrict(i64::MIN, -1)
    }
}

fn add_into(acc: &mut [GaussianRational], acc_min: i64, x: &LaurentScalar, negate: bool) {
    for (j, c) in x.coeffs.iter().enumerate() {
        let idx = (x.pmin + j as i64 - acc_min) as usize;
        if negate {
            acc[idx] -= c;
        } else {
            acc[idx] += c;
        }
    }
}

fn combine(a: &LaurentScalar, b: &LaurentScalar, negate_b: bool) -> LaurentScalar {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if negate_b { -b } else { b.clone() };
    }
    let lo = a.pmin.min(b.pmin);
    let hi = a.pmax().unwrap().max(b.pmax().unwrap());
    let mut acc = vec![GaussianRational::zero(); (hi - lo + 1) as usize];
    add_into(&mut acc, lo, a, false);
    add_into(&mut acc, lo, b, negate_b);
    LaurentScalar::from_coeffs(lo, acc)
}

impl<'a> Add<&'a LaurentScalar> for &'a LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: &LaurentScalar) -> LaurentScalar {
        combine(self, rhs, false)
    }
}

impl<'a> Sub<&'a LaurentScalar> for &'a LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: &LaurentScalar) -> LaurentScalar {
        combine(self, rhs, true)
    }
}

impl<'a> Mul<&'a LaurentScalar> for &'a LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: &LaurentScalar) -> LaurentScalar {
        if self.is_zero() || rhs.is_zero() {
            return LaurentScalar::zero();
        }
        if self.coeffs.len() == 1 {
            return LaurentScalar { pmin: self.pmin + rhs.pmin, coeffs: rhs.coeffs.iter().map(|y| &self.coeffs[0] * y).collect() };
        }
        if rhs.coeffs.len() == 1 {
            return LaurentScalar { pmin: self.pmin + rhs.pmin, coeffs: self.coeffs.iter().map(|x| x * &rhs.coeffs[0]).collect() };
        }
        // Integer convolution with a single reduction per output coefficient;
        // far cheaper than rational arithmetic term by term.
        let da = common_denominator([self]);
        let db = common_denominator([rhs]);
        IntPoly::scaled_from(self, &da).mul(&IntPoly::scaled_from(rhs, &db)).over(&(da * db))
    }
}

impl Add for LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: LaurentScalar) -> LaurentScalar {
        &self + &rhs
    }
}

impl Sub for LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: LaurentScalar) -> LaurentScalar {
        &self - &rhs
    }
}

impl Mul for LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: LaurentScalar) -> LaurentScalar {
        &self * &rhs
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        LaurentScalar { pmin: self.pmin, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        -&self
    }
}

impl From<GaussianRational> for LaurentScalar {
    fn from(c: GaussianRational) -> Self {
        Self::constant(c)
    }
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let needs_paren = !c.is_real() && !c.is_imaginary();
            match (k, needs_paren) {
                (0, _) => write!(f, "{c}")?,
                (_, true) => write!(f, "({c})*t^{k}")?,
                (_, false) => write!(f, "{c}*t^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarJson {
    pmin: i64,
    coeffs: Vec<GaussianRational>,
}

impl Serialize for LaurentScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ScalarJson { pmin: self.pmin, coeffs: self.coeffs.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ScalarJson::deserialize(d)?;
        Ok(Self::from_coeffs(j.pmin, j.coeffs))
    }
}
