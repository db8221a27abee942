use num_traits::{One, Zero};

use super::stream::{tail_norm_bounds, tail_norm_bounds_f64, CoefficientStream, Side};
use crate::arith::{default_tolerance, Rational, UpperBound};
use crate::error::{Error, Result};
use crate::laurent::{monomial_winding, LaurentMatrix2, LaurentScalar, NormBound};

/// The matrix function `[[1, beta_minus], [alpha_plus, t^theta + alpha_plus beta_minus]]`
/// described by its two coefficient streams.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnulusModel {
    pub plus: CoefficientStream,
    pub minus: CoefficientStream,
    pub theta: i64,
}

impl AnnulusModel {
    pub fn new(plus: CoefficientStream, minus: CoefficientStream, theta: i64) -> Result<Self> {
        if plus.side != Side::Plus || minus.side != Side::Minus {
            return Err(Error::InvalidParameter("streams are on the wrong sides".into()));
        }
        Ok(Self { plus, minus, theta })
    }
}

/// Circle radii `zeta1 < 1 < zeta2` at which the majorants are evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundContext {
    pub zeta1: Rational,
    pub zeta2: Rational,
    pub epsilon: Rational,
}

impl BoundContext {
    pub fn new(zeta1: Rational, zeta2: Rational) -> Self {
        Self { zeta1, zeta2, epsilon: Rational::new(1.into(), 100.into()) }
    }

    pub fn check(&self, model: &AnnulusModel) -> Result<()> {
        model.minus.check_zeta(&self.zeta1)?;
        model.plus.check_zeta(&self.zeta2)
    }
}

/// `a_N`: both streams cut at degree `n`; the determinant is checked to be `t^theta`.
pub fn truncate(model: &AnnulusModel, n: u64) -> Result<LaurentMatrix2> {
    let alpha = model.plus.truncation(n)?;
    let beta = model.minus.truncation(n)?;
    let a22 = &LaurentScalar::power(model.theta) + &(&alpha * &beta);
    let a = LaurentMatrix2::new(LaurentScalar::one(), beta, alpha, a22);
    let (c, w) = monomial_winding(&a.det())?;
    if !c.is_one() || w != model.theta {
        return Err(Error::NotMonomialDet(format!("truncation has determinant {}", a.det())));
    }
    Ok(a)
}

/// Extra distance caused by using approximate coefficients: each listed value is
/// off by at most the stream's budget, which perturbs the three nontrivial
/// entries of `a_N`.
fn budget_correction(model: &AnnulusModel, n: u64, norm_alpha: &UpperBound, norm_beta: &UpperBound) -> UpperBound {
    let ea = &model.plus.budget;
    let eb = &model.minus.budget;
    if ea.is_zero() && eb.is_zero() {
        return UpperBound::zero();
    }
    let n_r = Rational::from_integer(n.into());
    let np1 = &n_r + Rational::one();
    let beta_drift = &n_r * eb;
    let alpha_part = norm_beta.add_exact(&(Rational::one() + &beta_drift)).scale(&(&np1 * ea));
    let beta_part = norm_alpha.add_exact(&Rational::one()).scale(&beta_drift);
    alpha_part.add(&beta_part)
}

/// Certified upper bound on `||a - a_N||_W`:
/// `(1 + ||alpha||) * beta_tail + (1 + ||beta||) * alpha_tail`, plus the budget term.
pub fn delta_n(model: &AnnulusModel, n: u64, ctx: &BoundContext) -> Result<UpperBound> {
    delta_n_with_tolerance(model, n, ctx, &default_tolerance())
}

pub fn delta_n_with_tolerance(model: &AnnulusModel, n: u64, ctx: &BoundContext, rel: &Rational) -> Result<UpperBound> {
    ctx.check(model)?;
    let a = tail_norm_bounds(&model.plus, &ctx.zeta2, n, rel)?;
    let b = tail_norm_bounds(&model.minus, &ctx.zeta1, n, rel)?;
    let one = Rational::one();
    let d = a.norm.add_exact(&one).mul(&b.tail).add(&b.norm.add_exact(&one).mul(&a.tail));
    Ok(d.add(&budget_correction(model, n, &a.norm, &b.norm)))
}

/// The same quantity in floating point; `None` when the radii are inadmissible.
pub fn delta_n_f64(model: &AnnulusModel, n: u64, zeta1: f64, zeta2: f64) -> Option<f64> {
    if !(model.plus.admits_f64(zeta2) && model.minus.admits_f64(zeta1)) {
        return None;
    }
    let (na, ta) = tail_norm_bounds_f64(&model.plus, zeta2, n);
    let (nb, tb) = tail_norm_bounds_f64(&model.minus, zeta1, n);
    let ea = crate::arith::rational::to_f64(&model.plus.budget);
    let eb = crate::arith::rational::to_f64(&model.minus.budget);
    let nf = n as f64;
    let budget = (nf + 1.0) * ea * (1.0 + nb + nf * eb) + nf * eb * (1.0 + na);
    let d = (1.0 + na) * tb + (1.0 + nb) * ta + budget;
    d.is_finite().then_some(d)
}

/// `||a_{n0} - a_n||_W`, exact whenever the coefficient moduli are rational.
pub fn truncation_distance(a_n0: &LaurentMatrix2, a_n: &LaurentMatrix2) -> NormBound {
    (a_n0 - a_n).wiener_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};
    use crate::arith::GaussianRational;

    fn ex61() -> AnnulusModel {
        AnnulusModel::new(
            CoefficientStream::sqrt_plus(int(5)).unwrap(),
            CoefficientStream::sqrt_minus(rat(1, 5)).unwrap(),
            0,
        )
        .unwrap()
    }

    #[test]
    fn first_truncations() {
        let m = ex61();
        let a1 = truncate(&m, 1).unwrap();
        let i_over_t = LaurentScalar::monomial(GaussianRational::i(), -1);
        let expected = LaurentMatrix2::new(
            LaurentScalar::one(),
            i_over_t.clone(),
            LaurentScalar::constant(int(5).into()),
            &LaurentScalar::one() + &i_over_t.scale(&int(5).into()),
        );
        assert_eq!(a1, expected);
        let a0 = truncate(&m, 0).unwrap();
        assert_eq!(a0.get(0, 1), &LaurentScalar::zero());
        assert_eq!(a0.get(1, 1), &LaurentScalar::one());
    }

    #[test]
    fn closed_form_delta() {
        let m = ex61();
        let ctx = BoundContext::new(rat(1, 5), int(5));
        for n in [1u64, 6, 20] {
            let d = delta_n(&m, n, &ctx).unwrap();
            let closed = (15.0 + 2.0 * 2f64.sqrt()) / 4.0 * 5f64.powi(1 - n as i32);
            assert!(((d.to_f64() - closed) / closed).abs() < 1e-12, "n={n}");
            let f = delta_n_f64(&m, n, 0.2, 5.0).unwrap();
            assert!(((f - closed) / closed).abs() < 1e-12);
        }
    }

    #[test]
    fn inadmissible_context() {
        let m = ex61();
        assert!(delta_n(&m, 3, &BoundContext::new(rat(1, 6), int(5))).is_err());
        assert!(delta_n(&m, 3, &BoundContext::new(rat(1, 5), int(6))).is_err());
    }

    #[test]
    fn budget_widens_bound() {
        let exact = ex61();
        let mut approx = exact.clone();
        approx.plus.budget = rat(1, 1_000_000);
        let ctx = BoundContext::new(rat(1, 5), int(5));
        let d0 = delta_n(&exact, 4, &ctx).unwrap();
        let d1 = delta_n(&approx, 4, &ctx).unwrap();
        assert!(d1.value > d0.value);
    }
}
