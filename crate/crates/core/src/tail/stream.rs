//! Coefficient streams for the off-diagonal functions `alpha_plus` and
//! `beta_minus`, with certified majorants of their modulus on circles.
//!
//! A plus stream is indexed by `n >= 0` (coefficient of `t^n`), a minus stream
//! by `n >= 1` (coefficient of `t^-n`).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{
    abs_upper, exp_of_bound, relative_to_absolute, rational::to_f64, sqrt_upper, BoundKind, GaussianRational,
    Rational, UpperBound,
};
use crate::error::{Error, Result};
use crate::laurent::LaurentScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

/// `r2` for a plus stream, `r1` for a minus stream.
#[derive(Clone, Debug, PartialEq)]
pub enum Radius {
    Finite(Rational),
    Infinite,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// `k2 sqrt(1 - t^2/k2^2)` expanded at the origin.
    SqrtPlus { k2: Rational },
    /// `(i/t) sqrt(1 - k1^2/t^2)` expanded at infinity.
    SqrtMinus { k1: Rational },
    /// `t^-1 (1 + k1^2/t^2)^(-1/2)` expanded at infinity.
    InvSqrtMinus { k1: Rational },
    /// `e^(k t)`.
    ExpPlus { k: GaussianRational },
    /// `t^-1 e^(k/t)`.
    ExpMinus { k: GaussianRational },
    /// Explicit coefficients; when `complete`, everything past the list is zero.
    Listed { coeffs: Vec<GaussianRational>, complete: bool },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Majorant {
    /// `sqrt(k^2 + z^2) * z^power`.
    SqrtSum { k_sq: Rational, power: i32 },
    /// `(z^2 - k^2)^(-1/2)`.
    InvSqrtDiff { k_sq: Rational },
    /// `e^(|k| z) * z^power`, or `e^(|k| / z) * z^power` when `inverted`.
    Exp { k_abs_sq: Rational, inverted: bool, power: i32 },
    /// Finite data: norms and tails are summed exactly, no circle needed.
    ExactSums,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientStream {
    pub side: Side,
    pub generator: Generator,
    pub radius: Radius,
    /// Whether the circle `|t| = radius` itself is admissible.
    pub closed: bool,
    pub majorant: Majorant,
    /// Per-coefficient approximation error of the listed values (zero when exact).
    pub budget: Rational,
}

fn double_factorial(m: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut j = m;
    while j > 1 {
        acc *= j;
        j -= 2;
    }
    acc
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, j| acc * j)
}

fn gpow(z: &GaussianRational, n: u64) -> GaussianRational {
    let mut acc = GaussianRational::one();
    for _ in 0..n {
        acc = &acc * z;
    }
    acc
}

fn rpow(r: &Rational, n: u64) -> Rational {
    num_traits::pow(r.clone(), n as usize)
}

fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

impl CoefficientStream {
    fn exact(side: Side, generator: Generator, radius: Radius, closed: bool, majorant: Majorant) -> Self {
        Self { side, generator, radius, closed, majorant, budget: Rational::zero() }
    }

    /// `k2 sqrt(1 - t^2/k2^2)`, analytic up to and including `|t| = k2`.
    pub fn sqrt_plus(k2: Rational) -> Result<Self> {
        if !k2.is_positive() {
            return Err(Error::InvalidParameter("k2 must be positive".into()));
        }
        let k_sq = &k2 * &k2;
        Ok(Self::exact(Side::Plus, Generator::SqrtPlus { k2: k2.clone() }, Radius::Finite(k2), true, Majorant::SqrtSum {
            k_sq,
            power: 0,
        }))
    }

    /// `(i/t) sqrt(1 - k1^2/t^2)`, analytic down to and including `|t| = k1`.
    pub fn sqrt_minus(k1: Rational) -> Result<Self> {
        if !k1.is_positive() {
            return Err(Error::InvalidParameter("k1 must be positive".into()));
        }
        let k_sq = &k1 * &k1;
        Ok(Self::exact(Side::Minus, Generator::SqrtMinus { k1: k1.clone() }, Radius::Finite(k1), true, Majorant::SqrtSum {
            k_sq,
            power: -2,
        }))
    }

    /// `(k1^2 + t^2)^(-1/2)` expanded at infinity; analytic for `|t| > k1` only.
    pub fn inv_sqrt_minus(k1: Rational) -> Result<Self> {
        if !k1.is_positive() {
            return Err(Error::InvalidParameter("k1 must be positive".into()));
        }
        let k_sq = &k1 * &k1;
        Ok(Self::exact(Side::Minus, Generator::InvSqrtMinus { k1: k1.clone() }, Radius::Finite(k1), false, Majorant::InvSqrtDiff {
            k_sq,
        }))
    }

    pub fn exp_plus(k: GaussianRational) -> Self {
        let k_abs_sq = k.abs_squared();
        Self::exact(Side::Plus, Generator::ExpPlus { k }, Radius::Infinite, false, Majorant::Exp {
            k_abs_sq,
            inverted: false,
            power: 0,
        })
    }

    pub fn exp_minus(k: GaussianRational) -> Self {
        let k_abs_sq = k.abs_squared();
        Self::exact(Side::Minus, Generator::ExpMinus { k }, Radius::Finite(Rational::zero()), false, Majorant::Exp {
            k_abs_sq,
            inverted: true,
            power: -1,
        })
    }

    /// A polynomial (plus side: `c0 + c1 t + ...`; minus side: `c1/t + c2/t^2 + ...`).
    pub fn finite(side: Side, coeffs: Vec<GaussianRational>) -> Self {
        let radius = match side {
            Side::Plus => Radius::Infinite,
            Side::Minus => Radius::Finite(Rational::zero()),
        };
        Self::exact(side, Generator::Listed { coeffs, complete: true }, radius, false, Majorant::ExactSums)
    }

    pub fn zero(side: Side) -> Self {
        Self::finite(side, Vec::new())
    }

    /// Approximate coefficients of a function whose majorant and radius the caller
    /// vouches for; each listed value is within `budget` of the true coefficient.
    pub fn approximate(
        side: Side,
        coeffs: Vec<GaussianRational>,
        budget: Rational,
        radius: Radius,
        closed: bool,
        majorant: Majorant,
    ) -> Result<Self> {
        if budget.is_negative() {
            return Err(Error::InvalidParameter("budget must be nonnegative".into()));
        }
        if majorant == Majorant::ExactSums {
            return Err(Error::InvalidParameter("an approximate stream needs an analytic majorant".into()));
        }
        Ok(Self { side, generator: Generator::Listed { coeffs, complete: false }, radius, closed, majorant, budget })
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.generator, Generator::Listed { coeffs, complete: true } if coeffs.iter().all(|c| c.is_zero()))
    }

    fn first_index(&self) -> u64 {
        match self.side {
            Side::Plus => 0,
            Side::Minus => 1,
        }
    }

    /// Power of `t` carried by coefficient `n`.
    pub fn power_of(&self, n: u64) -> i64 {
        match self.side {
            Side::Plus => n as i64,
            Side::Minus => -(n as i64),
        }
    }

    /// Coefficient `n`, from its closed form.
    pub fn coefficient(&self, n: u64) -> Result<GaussianRational> {
        if n < self.first_index() {
            return Ok(GaussianRational::zero());
        }
        let c = match &self.generator {
            Generator::SqrtPlus { k2 } => {
                if n % 2 == 1 {
                    Rational::zero().into()
                } else if n == 0 {
                    k2.clone().into()
                } else {
                    let m = (n / 2) as i64;
                    let mag = Rational::new(double_factorial(2 * m - 3), double_factorial(2 * m)) / rpow(k2, n - 1);
                    (-mag).into()
                }
            }
            Generator::SqrtMinus { k1 } => {
                if n.is_multiple_of(2) {
                    GaussianRational::zero()
                } else {
                    let m = ((n - 1) / 2) as i64;
                    if m == 0 {
                        GaussianRational::i()
                    } else {
                        let mag = Rational::new(double_factorial(2 * m - 3), double_factorial(2 * m)) * rpow(k1, n - 1);
                        GaussianRational::imag(-mag)
                    }
                }
            }
            Generator::InvSqrtMinus { k1 } => {
                if n.is_multiple_of(2) {
                    GaussianRational::zero()
                } else {
                    let m = ((n - 1) / 2) as i64;
                    let mag = Rational::new(double_factorial(2 * m - 1), double_factorial(2 * m)) * rpow(k1, n - 1);
                    if m % 2 == 1 { -mag } else { mag }.into()
                }
            }
            Generator::ExpPlus { k } => gpow(k, n).scale(&Rational::new(BigInt::one(), factorial(n))),
            Generator::ExpMinus { k } => gpow(k, n - 1).scale(&Rational::new(BigInt::one(), factorial(n - 1))),
            Generator::Listed { coeffs, complete } => {
                let idx = (n - self.first_index()) as usize;
                match coeffs.get(idx) {
                    Some(c) => c.clone(),
                    None if *complete => GaussianRational::zero(),
                    None => {
                        return Err(Error::InvalidParameter(format!(
                            "stream lists {} coefficients, coefficient {n} requested",
                            coeffs.len()
                        )))
                    }
                }
            }
        };
        Ok(c)
    }

    /// Coefficients `first..=n_max` by the ratio recurrence of each series. Entry
    /// `j` of the result is coefficient `first + j`.
    pub fn coefficients(&self, n_max: u64) -> Result<Vec<GaussianRational>> {
        let first = self.first_index();
        if n_max < first {
            return Ok(Vec::new());
        }
        let count = (n_max - first + 1) as usize;
        let mut out = Vec::with_capacity(count);
        match &self.generator {
            Generator::SqrtPlus { k2 } => {
                let k2_sq = k2 * k2;
                let mut even = GaussianRational::from(k2.clone());
                for n in 0..=n_max {
                    if n % 2 == 1 {
                        out.push(GaussianRational::zero());
                        continue;
                    }
                    if n == 2 {
                        even = GaussianRational::from(-(Rational::one() / (Rational::from_integer(2.into()) * k2)));
                    } else if n > 2 {
                        // c_{2m+2} / c_{2m} = (2m-1) / ((2m+2) k2^2)
                        let m = (n / 2 - 1) as i64;
                        even = even.scale(&(ratio(2 * m - 1, 2 * m + 2) / &k2_sq));
                    }
                    out.push(even.clone());
                }
            }
            Generator::SqrtMinus { k1 } | Generator::InvSqrtMinus { k1 } => {
                let k1_sq = k1 * k1;
                let inv = matches!(self.generator, Generator::InvSqrtMinus { .. });
                let mut odd = if inv { GaussianRational::one() } else { GaussianRational::i() };
                for n in 1..=n_max {
                    if n % 2 == 0 {
                        out.push(GaussianRational::zero());
                        continue;
                    }
                    let m = ((n - 1) / 2) as i64;
                    if m >= 1 {
                        let r = if inv {
                            // e_{2m+1} / e_{2m-1} = -(2m-1) k1^2 / (2m)
                            -(ratio(2 * m - 1, 2 * m) * &k1_sq)
                        } else if m == 1 {
                            -(ratio(1, 2) * &k1_sq)
                        } else {
                            // d_{2m+1} / d_{2m-1} = (2m-3) k1^2 / (2m)
                            ratio(2 * m - 3, 2 * m) * &k1_sq
                        };
                        odd = odd.scale(&r);
                    }
                    out.push(odd.clone());
                }
            }
            Generator::ExpPlus { k } => {
                let mut c = GaussianRational::one();
                for n in 0..=n_max {
                    if n > 0 {
                        c = (&c * k).scale(&ratio(1, n as i64));
                    }
                    out.push(c.clone());
                }
            }
            Generator::ExpMinus { k } => {
                let mut c = GaussianRational::one();
                for n in 1..=n_max {
                    if n > 1 {
                        c = (&c * k).scale(&ratio(1, n as i64 - 1));
                    }
                    out.push(c.clone());
                }
            }
            Generator::Listed { .. } => {
                for n in first..=n_max {
                    out.push(self.coefficient(n)?);
                }
            }
        }
        Ok(out)
    }

    /// The truncation `sum_{first <= n <= n_max} c_n t^(+-n)`.
    pub fn truncation(&self, n_max: u64) -> Result<LaurentScalar> {
        let cs = self.coefficients(n_max)?;
        Ok(match self.side {
            Side::Plus => LaurentScalar::from_coeffs(0, cs),
            Side::Minus => {
                let mut rev = cs;
                rev.reverse();
                LaurentScalar::from_coeffs(-(n_max as i64), rev)
            }
        })
    }

    /// Checks that the circle `|t| = zeta` is admissible for this stream.
    pub fn check_zeta(&self, zeta: &Rational) -> Result<()> {
        let one = Rational::one();
        let bad = |why: String| Err(Error::Inadmissible(why));
        match self.side {
            Side::Plus if zeta <= &one => return bad(format!("zeta2 = {zeta} must exceed 1")),
            Side::Minus if zeta >= &one || !zeta.is_positive() => return bad(format!("zeta1 = {zeta} must lie in (0, 1)")),
            _ => {}
        }
        if self.majorant == Majorant::ExactSums {
            return Ok(());
        }
        if let Radius::Finite(r) = &self.radius {
            let inside = match self.side {
                Side::Plus => zeta < r,
                Side::Minus => zeta > r,
            };
            if !(inside || (self.closed && zeta == r)) {
                return bad(format!("zeta = {zeta} outside the annulus of analyticity (radius {r})"));
            }
        }
        Ok(())
    }

    /// Floating-point counterpart of [`Self::check_zeta`].
    pub fn admits_f64(&self, zeta: f64) -> bool {
        let side_ok = match self.side {
            Side::Plus => zeta > 1.0,
            Side::Minus => zeta > 0.0 && zeta < 1.0,
        };
        if !side_ok || self.majorant == Majorant::ExactSums {
            return side_ok;
        }
        match &self.radius {
            Radius::Finite(r) => {
                let r = to_f64(r);
                let inside = match self.side {
                    Side::Plus => zeta < r,
                    Side::Minus => zeta > r,
                };
                inside || (self.closed && zeta == r)
            }
            Radius::Infinite => true,
        }
    }

    /// Certified upper bound of `max_{|t|=zeta} |f(t)|`.
    pub fn majorant_upper(&self, zeta: &Rational, rel: &Rational) -> Result<UpperBound> {
        self.check_zeta(zeta)?;
        let approx = self.majorant_f64(to_f64(zeta));
        let tol = relative_to_absolute(rel, approx);
        let b = match &self.majorant {
            Majorant::SqrtSum { k_sq, power } => {
                let zp = crate::arith::rational::pow_i(zeta, *power as i64);
                let s = sqrt_upper(&(k_sq + zeta * zeta), &(&tol / &zp))?;
                s.scale(&zp)
            }
            Majorant::InvSqrtDiff { k_sq } => {
                let x = zeta * zeta - k_sq;
                if !x.is_positive() {
                    return Err(Error::Inadmissible(format!("zeta = {zeta} on or inside the branch circle")));
                }
                // 1/sqrt(x) = sqrt(x)/x
                let s = sqrt_upper(&x, &(&tol * &x))?;
                s.scale(&x.recip())
            }
            Majorant::Exp { k_abs_sq, inverted, power } => {
                let zp = crate::arith::rational::pow_i(zeta, *power as i64);
                let arg = if *inverted { zeta.recip() } else { zeta.clone() };
                // the rate error is amplified by arg * e^(rate arg)
                let damp = Rational::from_integer(1024.into()) * (&arg + Rational::one());
                let rate = sqrt_upper(k_abs_sq, &(rel / damp))?;
                let e = exp_of_bound(&rate, &arg, &(&tol / &zp / Rational::from_integer(2.into())))?;
                e.scale(&zp)
            }
            Majorant::ExactSums => {
                let (norm, _) = self.exact_sums(0, rel)?;
                norm
            }
        };
        Ok(b)
    }

    pub fn majorant_f64(&self, zeta: f64) -> f64 {
        match &self.majorant {
            Majorant::SqrtSum { k_sq, power } => (to_f64(k_sq) + zeta * zeta).sqrt() * zeta.powi(*power),
            Majorant::InvSqrtDiff { k_sq } => 1.0 / (zeta * zeta - to_f64(k_sq)).sqrt(),
            Majorant::Exp { k_abs_sq, inverted, power } => {
                let k = to_f64(k_abs_sq).sqrt();
                let arg = if *inverted { 1.0 / zeta } else { zeta };
                (k * arg).exp() * zeta.powi(*power)
            }
            Majorant::ExactSums => self.exact_sums_f64(0).0,
        }
    }

    fn listed(&self) -> &[GaussianRational] {
        match &self.generator {
            Generator::Listed { coeffs, .. } => coeffs,
            _ => &[],
        }
    }

    /// Exact sums of moduli: `(all coefficients, coefficients with index > n)`.
    fn exact_sums(&self, n: u64, rel: &Rational) -> Result<(UpperBound, UpperBound)> {
        let mut norm = UpperBound::zero();
        let mut tail = UpperBound::zero();
        for (j, c) in self.listed().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let tol = relative_to_absolute(rel, c.abs_f64());
            let a = abs_upper(c, &tol)?;
            norm = norm.add(&a);
            if j as u64 + self.first_index() > n {
                tail = tail.add(&a);
            }
        }
        Ok((norm, tail))
    }

    fn exact_sums_f64(&self, n: u64) -> (f64, f64) {
        let mut norm = 0.0;
        let mut tail = 0.0;
        for (j, c) in self.listed().iter().enumerate() {
            let a = c.abs_f64();
            norm += a;
            if j as u64 + self.first_index() > n {
                tail += a;
            }
        }
        (norm, tail)
    }
}

/// Bounds on `||f||_W` and on the truncation tail `||f - f^(N)||_W`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailBounds {
    pub norm: UpperBound,
    pub tail: UpperBound,
}

/// Cauchy-inequality bounds from the majorant on `|t| = zeta`:
/// plus side `zeta M/(zeta-1)` and `M/(zeta^N (zeta-1))`;
/// minus side `zeta M/(1-zeta)` and `zeta^(N+1) M/(1-zeta)`.
pub fn tail_norm_bounds(stream: &CoefficientStream, zeta: &Rational, n: u64, rel: &Rational) -> Result<TailBounds> {
    stream.check_zeta(zeta)?;
    if stream.is_zero() {
        return Ok(TailBounds { norm: UpperBound::zero(), tail: UpperBound::zero() });
    }
    if stream.majorant == Majorant::ExactSums {
        let (norm, tail) = stream.exact_sums(n, rel)?;
        return Ok(TailBounds { norm, tail });
    }
    let m = stream.majorant_upper(zeta, rel)?;
    let one = Rational::one();
    let (norm_factor, tail_factor) = match stream.side {
        Side::Plus => {
            let gap = zeta - &one;
            (zeta / &gap, Rational::one() / (rpow(zeta, n) * &gap))
        }
        Side::Minus => {
            let gap = &one - zeta;
            (zeta / &gap, rpow(zeta, n + 1) / &gap)
        }
    };
    let mut norm = m.scale(&norm_factor);
    let mut tail = m.scale(&tail_factor);
    if !m.is_exact() {
        norm.kind = BoundKind::Composite;
        tail.kind = BoundKind::Composite;
    }
    Ok(TailBounds { norm, tail })
}

/// Floating-point evaluation of the same bounds, for searching over `zeta`.
pub fn tail_norm_bounds_f64(stream: &CoefficientStream, zeta: f64, n: u64) -> (f64, f64) {
    if stream.is_zero() {
        return (0.0, 0.0);
    }
    if stream.majorant == Majorant::ExactSums {
        return stream.exact_sums_f64(n);
    }
    let m = stream.majorant_f64(zeta);
    match stream.side {
        Side::Plus => (zeta * m / (zeta - 1.0), m / (zeta.powi(n as i32) * (zeta - 1.0))),
        Side::Minus => (zeta * m / (1.0 - zeta), zeta.powi(n as i32 + 1) * m / (1.0 - zeta)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn g(re: Rational, im: Rational) -> GaussianRational {
        GaussianRational::new(re, im)
    }

    #[test]
    fn sqrt_plus_first_terms() {
        let s = CoefficientStream::sqrt_plus(int(5)).unwrap();
        let p = s.truncation(2).unwrap();
        assert_eq!(p, LaurentScalar::from_coeffs(0, vec![int(5).into(), int(0).into(), rat(-1, 10).into()]));
    }

    #[test]
    fn sqrt_minus_first_term() {
        let s = CoefficientStream::sqrt_minus(rat(1, 5)).unwrap();
        assert_eq!(s.truncation(1).unwrap(), LaurentScalar::monomial(GaussianRational::i(), -1));
        assert_eq!(s.coefficient(3).unwrap(), g(int(0), rat(-1, 50)));
    }

    #[test]
    fn inv_sqrt_first_terms() {
        let s = CoefficientStream::inv_sqrt_minus(rat(1, 5)).unwrap();
        assert_eq!(s.coefficient(1).unwrap(), GaussianRational::one());
        assert_eq!(s.coefficient(3).unwrap(), rat(-1, 50).into());
        assert_eq!(s.coefficient(5).unwrap(), (rat(3, 8) * rat(1, 625)).into());
    }

    #[test]
    fn recurrence_matches_closed_form() {
        let streams = [
            CoefficientStream::sqrt_plus(rat(7, 3)).unwrap(),
            CoefficientStream::sqrt_minus(rat(2, 7)).unwrap(),
            CoefficientStream::inv_sqrt_minus(rat(3, 5)).unwrap(),
            CoefficientStream::exp_plus(g(rat(1, 2), rat(-2, 3))),
            CoefficientStream::exp_minus(g(int(1), int(1))),
            CoefficientStream::finite(Side::Minus, vec![int(1).into(), int(2).into()]),
        ];
        for s in &streams {
            let rec = s.coefficients(25).unwrap();
            for (j, c) in rec.iter().enumerate() {
                let n = j as u64 + s.first_index();
                assert_eq!(c, &s.coefficient(n).unwrap(), "{:?} n={n}", s.generator);
            }
        }
    }

    #[test]
    fn majorant_values() {
        let plus = CoefficientStream::sqrt_plus(int(5)).unwrap();
        let tb = tail_norm_bounds(&plus, &int(5), 3, &crate::arith::default_tolerance()).unwrap();
        let expected = 25.0 * 2f64.sqrt() / 4.0;
        assert!((tb.norm.to_f64() - expected).abs() < 1e-12);
        assert!(tb.norm.to_f64() >= expected - 1e-15);

        let minus = CoefficientStream::exp_minus(int(1).into());
        let m = minus.majorant_upper(&rat(1, 10), &crate::arith::default_tolerance()).unwrap();
        let expected = 10.0 * 10f64.exp();
        assert!(((m.to_f64() - expected) / expected).abs() < 1e-13);

        let zero = CoefficientStream::zero(Side::Plus);
        let tb = tail_norm_bounds(&zero, &int(2), 4, &crate::arith::default_tolerance()).unwrap();
        assert_eq!(tb.norm, UpperBound::zero());
        assert_eq!(tb.tail, UpperBound::zero());
    }

    #[test]
    fn closure_flags() {
        let plus = CoefficientStream::sqrt_plus(int(5)).unwrap();
        assert!(plus.check_zeta(&int(5)).is_ok());
        assert!(plus.check_zeta(&rat(51, 10)).is_err());
        let open = CoefficientStream::inv_sqrt_minus(rat(1, 5)).unwrap();
        assert!(open.check_zeta(&rat(1, 5)).is_err());
        assert!(open.check_zeta(&rat(1, 4)).is_ok());
        assert!(open.check_zeta(&int(1)).is_err());
    }
}
