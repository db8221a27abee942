//! Reduction of a strictly nonsingular `A(t)` to the form
//! `a = [[1, beta_minus], [alpha_plus, t^theta + alpha_plus beta_minus]]`,
//! given Wiener-Hopf factorisations of `a11` and `det A`.
//!
//! The scalar factorisations are inputs. Divisions are carried out exactly, so
//! every divisor that appears must be a monomial; anything else has to go
//! through coefficient streams instead.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{LaurentMatrix2, LaurentScalar};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarFactorisationData {
    pub a11_minus: LaurentScalar,
    pub a11_plus: LaurentScalar,
    pub kappa: i64,
    pub delta_minus: LaurentScalar,
    pub delta_plus: LaurentScalar,
    pub theta: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionResult {
    pub a: LaurentMatrix2,
    pub kappa: i64,
    pub theta: i64,
    pub outer_minus: LaurentMatrix2,
    pub outer_plus: LaurentMatrix2,
    pub alpha_plus: LaurentScalar,
    pub beta_minus: LaurentScalar,
}

fn exact_div(num: &LaurentScalar, den: &LaurentScalar, what: &str) -> Result<LaurentScalar> {
    let (c, m) = den
        .as_monomial()
        .ok_or_else(|| Error::Reduction(format!("{what}: divisor {den} is not a monomial; supply coefficient streams")))?;
    Ok(num.shift(-m).scale(&c.inv()?))
}

fn check_scalar_data(a: &LaurentMatrix2, s: &ScalarFactorisationData) -> Result<()> {
    let a11 = &(&s.a11_minus * &LaurentScalar::power(s.kappa)) * &s.a11_plus;
    if &a11 != a.get(0, 0) {
        return Err(Error::Reduction(format!("a11 factors give {a11}, expected {}", a.get(0, 0))));
    }
    let det = &(&s.delta_minus * &LaurentScalar::power(s.theta + 2 * s.kappa)) * &s.delta_plus;
    if det != a.det() {
        return Err(Error::Reduction(format!("determinant factors give {det}, expected {}", a.det())));
    }
    let minus_ok = |x: &LaurentScalar| x.pmax().is_some_and(|p| p <= 0);
    let plus_ok = |x: &LaurentScalar| !x.is_zero() && x.pmin() >= 0;
    if !(minus_ok(&s.a11_minus) && minus_ok(&s.delta_minus) && plus_ok(&s.a11_plus) && plus_ok(&s.delta_plus)) {
        return Err(Error::Reduction("scalar factors have the wrong support".into()));
    }
    Ok(())
}

/// `A = t^kappa * outer_minus * a * outer_plus`, verified exactly.
pub fn reduce_to_aform(big_a: &LaurentMatrix2, s: &ScalarFactorisationData) -> Result<ReductionResult> {
    if big_a.get(0, 0).is_zero() || big_a.det().is_zero() {
        return Err(Error::Reduction("a11 or det A vanishes identically".into()));
    }
    check_scalar_data(big_a, s)?;
    let tk = LaurentScalar::power(s.kappa);
    let alpha = exact_div(
        &(&s.a11_minus * big_a.get(1, 0)),
        &(&(&s.delta_minus * &tk) * &s.a11_plus),
        "alpha",
    )?;
    let beta = exact_div(
        &(&s.a11_plus * big_a.get(0, 1)),
        &(&(&s.delta_plus * &tk) * &s.a11_minus),
        "beta",
    )?;
    let m22 = exact_div(
        &(&(big_a.get(1, 1) * &s.a11_minus) * &s.a11_plus),
        &(&(&tk * &s.delta_minus) * &s.delta_plus),
        "middle entry",
    )?;
    let alpha_plus = alpha.project_plus();
    let alpha_minus = alpha.project_minus_zero();
    let beta_plus = beta.project_plus();
    let beta_minus = beta.project_minus_zero();

    let one = LaurentScalar::one();
    let zero = LaurentScalar::zero();
    let middle = LaurentMatrix2::new(one.clone(), beta, alpha, m22);
    let left = LaurentMatrix2::new(one.clone(), zero.clone(), -&alpha_minus, one.clone());
    let right = LaurentMatrix2::new(one.clone(), -&beta_plus, zero.clone(), one.clone());
    let a = &(&left * &middle) * &right;

    let expected = LaurentMatrix2::new(
        one,
        beta_minus.clone(),
        alpha_plus.clone(),
        &LaurentScalar::power(s.theta) + &(&alpha_plus * &beta_minus),
    );
    if a != expected {
        return Err(Error::Reduction("the reduced matrix does not have the expected shape".into()));
    }

    let dm_over = exact_div(&s.delta_minus, &s.a11_minus, "outer minus")?;
    let dp_over = exact_div(&s.delta_plus, &s.a11_plus, "outer plus")?;
    let outer_minus = LaurentMatrix2::new(s.a11_minus.clone(), zero.clone(), &dm_over * &alpha_minus, dm_over);
    let outer_plus = LaurentMatrix2::new(s.a11_plus.clone(), &dp_over * &beta_plus, zero, dp_over);

    let back = (&(&outer_minus * &a) * &outer_plus).shift(s.kappa);
    if &back != big_a {
        return Err(Error::Reduction("reassembly does not reproduce the input".into()));
    }
    Ok(ReductionResult { a, kappa: s.kappa, theta: s.theta, outer_minus, outer_plus, alpha_plus, beta_minus })
}

/// Partial indices of `A` from those of its reduced form.
pub fn recompose_indices(kappa: i64, rho1: i64, rho2: i64) -> (i64, i64) {
    (kappa + rho1, kappa + rho2)
}

/// The stable index pair with sum `theta`.
pub fn stable_pattern(theta: i64) -> (i64, i64) {
    let nu = theta.div_euclid(2);
    (nu, theta - nu)
}
