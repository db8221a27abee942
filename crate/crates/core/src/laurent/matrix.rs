use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::intpoly::IntMatrix;
use super::scalar::LaurentScalar;
use crate::arith::{ArithError, GaussianRational};
use crate::error::{Error, Result};

/// Constant 2x2 matrix over Q(i).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Mat2(pub [[GaussianRational; 2]; 2]);

impl Mat2 {
    pub fn new(a: GaussianRational, b: GaussianRational, c: GaussianRational, d: GaussianRational) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn identity() -> Self {
        Self::new(GaussianRational::one(), GaussianRational::zero(), GaussianRational::zero(), GaussianRational::one())
    }

    /// The exchange matrix `[[0,1],[1,0]]`.
    pub fn exchange() -> Self {
        Self::new(GaussianRational::zero(), GaussianRational::one(), GaussianRational::one(), GaussianRational::zero())
    }

    pub fn from_ints(m: [[i64; 2]; 2]) -> Self {
        let g = |x: i64| GaussianRational::from(x);
        Self::new(g(m[0][0]), g(m[0][1]), g(m[1][0]), g(m[1][1]))
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussianRational {
        &self.0[i][j]
    }

    pub fn det(&self) -> GaussianRational {
        let m = &self.0;
        &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])
    }

    pub fn inverse(&self) -> Result<Self, ArithError> {
        let d = self.det().inv()?;
        let m = &self.0;
        Ok(Self::new(&m[1][1] * &d, -&(&m[0][1] * &d), -&(&m[1][0] * &d), &m[0][0] * &d))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_zero())
    }

    pub fn to_laurent(&self) -> LaurentMatrix2 {
        LaurentMatrix2::from_fn(|i, j| LaurentScalar::constant(self.0[i][j].clone()))
    }
}

impl<'a> Mul<&'a Mat2> for &'a Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let e = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

/// 2x2 matrix of Laurent polynomials over Q(i).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentMatrix2 {
    pub entries: [[LaurentScalar; 2]; 2],
}

impl LaurentMatrix2 {
    pub fn new(a: LaurentScalar, b: LaurentScalar, c: LaurentScalar, d: LaurentScalar) -> Self {
        Self { entries: [[a, b], [c, d]] }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> LaurentScalar) -> Self {
        Self::new(f(0, 0), f(0, 1), f(1, 0), f(1, 1))
    }

    pub fn identity() -> Self {
        Self::diag(LaurentScalar::one(), LaurentScalar::one())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn diag(a: LaurentScalar, d: LaurentScalar) -> Self {
        Self::new(a, LaurentScalar::zero(), LaurentScalar::zero(), d)
    }

    /// `diag(t^r1, t^r2)`.
    pub fn diag_powers(r1: i64, r2: i64) -> Self {
        Self::diag(LaurentScalar::power(r1), LaurentScalar::power(r2))
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentScalar {
        &self.entries[i][j]
    }

    pub fn map(&self, f: impl Fn(&LaurentScalar) -> LaurentScalar) -> Self {
        Self::from_fn(|i, j| f(&self.entries[i][j]))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|x| x.is_zero())
    }

    /// Lowest and highest powers over all entries; `None` for the zero matrix.
    pub fn support(&self) -> Option<(i64, i64)> {
        let mut out: Option<(i64, i64)> = None;
        for e in self.entries.iter().flatten() {
            if let (Some(lo), Some(hi)) = (e.lowest(), e.pmax()) {
                out = Some(match out {
                    None => (lo, hi),
                    Some((a, b)) => (a.min(lo), b.max(hi)),
                });
            }
        }
        out
    }

    /// True when every power is `<= 0`.
    pub fn is_minus_type(&self) -> bool {
        self.support().is_none_or(|(_, hi)| hi <= 0)
    }

    /// True when every power is `>= 0`.
    pub fn is_plus_type(&self) -> bool {
        self.support().is_none_or(|(lo, _)| lo >= 0)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        self.map(|x| x.scale(c))
    }

    /// Multiplies every entry by `t^m`.
    pub fn shift(&self, m: i64) -> Self {
        self.map(|x| x.shift(m))
    }

    pub fn transpose(&self) -> Self {
        let e = &self.entries;
        Self::new(e[0][0].clone(), e[1][0].clone(), e[0][1].clone(), e[1][1].clone())
    }

    pub fn project_plus(&self) -> Self {
        self.map(LaurentScalar::project_plus)
    }

    pub fn project_minus(&self) -> Self {
        self.map(LaurentScalar::project_minus)
    }

    pub fn project_minus_zero(&self) -> Self {
        self.map(LaurentScalar::project_minus_zero)
    }

    /// Coefficient matrix of `t^k`.
    pub fn coefficient(&self, k: i64) -> Mat2 {
        let e = &self.entries;
        Mat2::new(e[0][0].coeff(k), e[0][1].coeff(k), e[1][0].coeff(k), e[1][1].coeff(k))
    }

    pub fn det(&self) -> LaurentScalar {
        let e = &self.entries;
        &(&e[0][0] * &e[1][1]) - &(&e[0][1] * &e[1][0])
    }

    pub fn adjugate(&self) -> Self {
        let e = &self.entries;
        Self::new(e[1][1].clone(), -&e[0][1], -&e[1][0], e[0][0].clone())
    }

    /// Whether `self * rhs == target`, decided in integer arithmetic.
    pub fn product_equals(&self, rhs: &Self, target: &Self) -> bool {
        let (x, y, t) = (IntMatrix::from_matrix(self), IntMatrix::from_matrix(rhs), IntMatrix::from_matrix(target));
        let num = x.mul_numerator(&y);
        let den = &x.den * &y.den;
        (0..2).all(|i| (0..2).all(|j| num[i][j].scale_int(&t.den) == t.entries[i][j].scale_int(&den)))
    }

    /// Whether the determinant is a nonzero constant.
    pub fn has_constant_det(&self) -> bool {
        let d = IntMatrix::from_matrix(self).det_numerator();
        d.pmin == 0 && d.coeffs.len() == 1
    }

    /// Inverse of a matrix whose determinant is a nonzero constant.
    pub fn invert_unimodular(&self) -> Result<Self> {
        let d = self.det();
        match d.as_constant() {
            Some(c) if !c.is_zero() => Ok(self.adjugate().scale(&c.inv()?)),
            _ => Err(Error::NonConstantDet(d.to_string())),
        }
    }

    /// The `t^0` coefficient of a minus-type matrix.
    pub fn value_at_infinity(&self) -> Result<Mat2> {
        if !self.is_minus_type() {
            return Err(Error::WrongSupport("positive"));
        }
        Ok(self.coefficient(0))
    }

    /// The `t^0` coefficient of a plus-type matrix.
    pub fn value_at_zero(&self) -> Result<Mat2> {
        if !self.is_plus_type() {
            return Err(Error::WrongSupport("negative"));
        }
        Ok(self.coefficient(0))
    }

    /// Right-multiplies by a constant matrix.
    pub fn mul_const_right(&self, m: &Mat2) -> Self {
        self * &m.to_laurent()
    }

    pub fn mul_const_left(&self, m: &Mat2) -> Self {
        &m.to_laurent() * self
    }

    pub fn swap_columns(&self) -> Self {
        let e = &self.entries;
        Self::new(e[0][1].clone(), e[0][0].clone(), e[1][1].clone(), e[1][0].clone())
    }

    pub fn swap_rows(&self) -> Self {
        let e = &self.entries;
        Self::new(e[1][0].clone(), e[1][1].clone(), e[0][0].clone(), e[0][1].clone())
    }

    pub fn column(&self, j: usize) -> [LaurentScalar; 2] {
        [self.entries[0][j].clone(), self.entries[1][j].clone()]
    }
}

/// `(c, theta)` with `det = c * t^theta`, or an error when the determinant is
/// not a single nonzero term.
pub fn monomial_winding(d: &LaurentScalar) -> Result<(GaussianRational, i64)> {
    d.as_monomial().ok_or_else(|| Error::NotMonomialDet(d.to_string()))
}

impl<'a> Mul<&'a LaurentMatrix2> for &'a LaurentMatrix2 {
    type Output = LaurentMatrix2;
    fn mul(self, rhs: &LaurentMatrix2) -> LaurentMatrix2 {
        let (a, b) = (&self.entries, &rhs.entries);
        LaurentMatrix2::from_fn(|i, j| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]))
    }
}

impl<'a> Add<&'a LaurentMatrix2> for &'a LaurentMatrix2 {
    type Output = LaurentMatrix2;
    fn add(self, rhs: &LaurentMatrix2) -> LaurentMatrix2 {
        LaurentMatrix2::from_fn(|i, j| &self.entries[i][j] + &rhs.entries[i][j])
    }
}

impl<'a> Sub<&'a LaurentMatrix2> for &'a LaurentMatrix2 {
    type Output = LaurentMatrix2;
    fn sub(self, rhs: &LaurentMatrix2) -> LaurentMatrix2 {
        LaurentMatrix2::from_fn(|i, j| &self.entries[i][j] - &rhs.entries[i][j])
    }
}

impl Neg for &LaurentMatrix2 {
    type Output = LaurentMatrix2;
    fn neg(self) -> LaurentMatrix2 {
        self.map(|x| -x)
    }
}

impl fmt::Debug for LaurentMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.entries;
        write!(f, "[[{}, {}], [{}, {}]]", e[0][0], e[0][1], e[1][0], e[1][1])
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<LaurentScalar>>,
}

impl Serialize for LaurentMatrix2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self.entries.iter().map(|r| r.to_vec()).collect();
        MatrixJson { rows: 2, cols: 2, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentMatrix2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = MatrixJson::deserialize(d)?;
        if j.rows != 2 || j.cols != 2 || j.entries.len() != 2 || j.entries.iter().any(|r| r.len() != 2) {
            return Err(D::Error::custom("only 2x2 matrices are supported"));
        }
        let mut it = j.entries.into_iter().flatten();
        let mut next = || it.next().unwrap();
        Ok(Self::new(next(), next(), next(), next()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    fn poly(pmin: i64, c: &[(i64, i64)]) -> LaurentScalar {
        LaurentScalar::from_coeffs(pmin, c.iter().map(|&(a, b)| g(a, b)).collect())
    }

    /// a_1 of the first worked example: [[1, i/t], [5, 1 + 5i/t]].
    fn a1() -> LaurentMatrix2 {
        LaurentMatrix2::new(poly(0, &[(1, 0)]), poly(-1, &[(0, 1)]), poly(0, &[(5, 0)]), poly(-1, &[(0, 5), (1, 0)]))
    }

    #[test]
    fn aform_structure() {
        let alpha = poly(0, &[(5, 0), (0, 0), (-1, 0)]);
        let beta = poly(-1, &[(0, 1)]);
        let lower = LaurentMatrix2::new(LaurentScalar::one(), LaurentScalar::zero(), alpha.clone(), LaurentScalar::one());
        let upper = LaurentMatrix2::new(LaurentScalar::one(), beta.clone(), LaurentScalar::zero(), LaurentScalar::power(3));
        let want = LaurentMatrix2::new(LaurentScalar::one(), beta.clone(), alpha.clone(), &LaurentScalar::power(3) + &(&alpha * &beta));
        assert_eq!(&lower * &upper, want);
    }

    #[test]
    fn determinants() {
        assert_eq!(monomial_winding(&a1().det()).unwrap(), (g(1, 0), 0));
        assert_eq!(LaurentMatrix2::diag_powers(-1, 1).det(), LaurentScalar::one());
        let bad = LaurentMatrix2::diag(poly(0, &[(1, 0), (1, 0)]), LaurentScalar::one());
        assert!(matches!(monomial_winding(&bad.det()), Err(Error::NotMonomialDet(_))));
    }

    #[test]
    fn unimodular_inverse() {
        let am = LaurentMatrix2::new(poly(-1, &[(0, -5), (1, 0)]), poly(-1, &[(0, 1)]), poly(-1, &[(0, -25)]), poly(-1, &[(0, 5), (1, 0)]));
        let inv = am.invert_unimodular().unwrap();
        let want = LaurentMatrix2::new(poly(-1, &[(0, 5), (1, 0)]), poly(-1, &[(0, -1)]), poly(-1, &[(0, 25)]), poly(-1, &[(0, -5), (1, 0)]));
        assert_eq!(inv, want);
        assert_eq!(&am * &inv, LaurentMatrix2::identity());
        assert_eq!(am.value_at_infinity().unwrap(), Mat2::identity());
        let ap = Mat2::from_ints([[1, 0], [5, 1]]).to_laurent();
        assert_eq!(ap.invert_unimodular().unwrap(), Mat2::from_ints([[1, 0], [-5, 1]]).to_laurent());
        assert!(a1().shift(1).value_at_infinity().is_err());
        assert!(LaurentMatrix2::diag_powers(0, 1).invert_unimodular().is_err());
    }

    #[test]
    fn lmp_json_round_trip() {
        let m = a1();
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.starts_with(r#"{"rows":2,"cols":2,"entries":[[{"pmin":0"#));
        assert_eq!(serde_json::from_str::<LaurentMatrix2>(&s).unwrap(), m);
        assert!(serde_json::from_str::<LaurentMatrix2>(r#"{"rows":3,"cols":2,"entries":[]}"#).is_err());
    }

    #[test]
    fn shifts_cancel() {
        let m = a1();
        assert_eq!(m.shift(2).shift(-2), m);
        assert_eq!(m.support(), Some((-1, 0)));
    }
}
