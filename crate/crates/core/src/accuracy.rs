//! Guaranteed distances between the factors of a truncation and those of the
//! full matrix function, for canonical (after a power shift) factorisations
//! normalised by `a_minus(inf) = I`.
//!
//! With `P = ||a_plus^-1||`, `M = ||a_minus^-1||`, `d` a bound on `||a - a_N||`
//! and `q = d P M < 1`:
//!
//! - `||a_plus^-1 - (a_plus^(N))^-1|| <= P^2 M^2 d / (1 - q)`
//! - `||a_minus - a_minus^(N)|| <= (P + ||a_N|| P^2 M^2/(1-q) + q P M/(1-q)) d`
//! - `||a_plus - a_plus^(N)|| <= ||a_plus||^2 P^2 M^2 d / (1 - q+)^2`, valid when
//!   `gamma = 4 d ||a_plus|| P^2 M^2 <= 1`, with `q+ = (1 - sqrt(1 - gamma))/2`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::rational::format_sig;
use crate::arith::{relative_to_absolute, sqrt_upper, BoundKind, Rational, UpperBound};
use crate::criterion::TruncationAnalysis;
use crate::error::Result;

/// `||A^-1 - B^-1|| <= ||A^-1||^2 ||A - B|| / (1 - q)` when `||A - B|| <= q / ||A^-1||`.
pub fn perturbed_inverse_bound(norm_a_inv: &UpperBound, norm_diff: &UpperBound, q: &UpperBound) -> Option<UpperBound> {
    let r = q.one_minus_recip()?;
    Some(norm_a_inv.mul(norm_a_inv).mul(norm_diff).mul(&r))
}

#[derive(Clone, Debug, PartialEq, Default, Serialize)]
pub struct AccuracyReport {
    #[serde(serialize_with = "ser_opt")]
    pub delta_inv_plus: Option<UpperBound>,
    #[serde(serialize_with = "ser_opt")]
    pub delta_minus: Option<UpperBound>,
    #[serde(serialize_with = "ser_opt")]
    pub delta_plus: Option<UpperBound>,
    #[serde(serialize_with = "ser_opt")]
    pub gamma_n: Option<UpperBound>,
    #[serde(serialize_with = "ser_opt")]
    pub q_plus_n: Option<UpperBound>,
    /// Power `nu` divided out before applying the canonical bounds.
    pub shift: i64,
    /// Why items are missing, when they are.
    pub note: Option<String>,
}

fn ser_opt<S: serde::Serializer>(b: &Option<UpperBound>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match b {
        Some(b) => crate::criterion::ser_bound(b, s),
        None => s.serialize_none(),
    }
}

pub const CSV_HEADER: &str = "N,delta_plus,delta_minus,gamma_N,q_plus_N,available_flags";

impl AccuracyReport {
    pub fn unavailable(note: &str) -> Self {
        Self { note: Some(note.to_string()), ..Self::default() }
    }

    pub fn flags(&self) -> String {
        let items = [
            ("inv_plus", &self.delta_inv_plus),
            ("minus", &self.delta_minus),
            ("plus", &self.delta_plus),
        ];
        let present: Vec<&str> = items.iter().filter(|(_, b)| b.is_some()).map(|(n, _)| *n).collect();
        if present.is_empty() {
            "none".to_string()
        } else {
            present.join(";")
        }
    }

    pub fn csv_row(&self, n: u64) -> String {
        let f = |b: &Option<UpperBound>| b.as_ref().map(|b| format_sig(&b.value, 10)).unwrap_or_default();
        format!("{},{},{},{},{},{}", n, f(&self.delta_plus), f(&self.delta_minus), f(&self.gamma_n), f(&self.q_plus_n), self.flags())
    }
}

/// Inputs to the general perturbation bounds for `A = A_minus A_plus`,
/// `A_minus(inf) = A0`, and a perturbation `B` with `||A - B|| <= norm_diff`.
#[derive(Clone, Debug)]
pub struct CanonicalInputs {
    pub norm_a: UpperBound,
    pub norm_a0: UpperBound,
    pub norm_plus_inv: UpperBound,
    pub norm_minus_inv: UpperBound,
    pub norm_plus: UpperBound,
    pub norm_diff: UpperBound,
    pub q: UpperBound,
}

/// The three factor bounds for a perturbed canonical factorisation. Each item is
/// `None` when its smallness condition cannot be certified.
pub fn general_canonical_bounds(x: &CanonicalInputs) -> AccuracyReport {
    let mut out = AccuracyReport::default();
    let Some(r) = x.q.one_minus_recip() else {
        out.note = Some("q is not certified below 1".into());
        return out;
    };
    let pm = x.norm_plus_inv.mul(&x.norm_minus_inv);
    // the radius condition ||A - B|| <= q / (P M)
    if x.norm_diff.mul(&pm).value > &x.q.value - &x.q.tolerance {
        out.note = Some("perturbation exceeds the radius q / (P M)".into());
        return out;
    }
    let pm2 = pm.mul(&pm);
    out.delta_inv_plus = Some(x.norm_a0.mul(&r).mul(&pm2).mul(&x.norm_diff));
    let middle = x.norm_a0.mul(&x.norm_a).mul(&pm2).mul(&r);
    let last = x.q.mul(&x.norm_a0).mul(&pm).mul(&r);
    out.delta_minus = Some(x.norm_plus_inv.add(&middle).add(&last).mul(&x.norm_diff));
    // stronger radius: ||A - B|| <= q (1 - q) / (P M ||A0|| M ||A_plus|| P)
    let one_minus_q = Rational::one() - &x.q.value;
    let strong = x.norm_diff.mul(&pm).mul(&x.norm_a0).mul(&x.norm_minus_inv).mul(&x.norm_plus).mul(&x.norm_plus_inv);
    if strong.value <= (&x.q.value - &x.q.tolerance) * &one_minus_q {
        let r2 = r.mul(&r);
        out.delta_plus = Some(x.norm_a0.mul(&r2).mul(&x.norm_plus.mul(&x.norm_plus)).mul(&pm2).mul(&x.norm_diff));
    }
    out
}

/// Certified upper bound of `(1 - sqrt(1 - gamma)) / 2` from an upper bound of
/// `gamma`; `None` unless `gamma <= 1` is certified.
fn q_plus_upper(gamma: &UpperBound) -> Result<Option<UpperBound>> {
    let one = Rational::one();
    if gamma.value > one {
        return Ok(None);
    }
    // 1 - gamma_upper is a lower bound of 1 - gamma; its square root from below
    let x = &one - &gamma.value;
    let tol = relative_to_absolute(&crate::arith::default_tolerance(), crate::arith::rational::to_f64(&x).sqrt());
    let lower_sqrt = if x.is_zero() {
        Rational::zero()
    } else {
        let s = sqrt_upper(&x, &tol)?;
        let l = &s.value - &s.tolerance;
        if l.is_negative() {
            Rational::zero()
        } else {
            l
        }
    };
    let value = (&one - lower_sqrt) / Rational::from_integer(2.into());
    let mut b = UpperBound::exact(value);
    // the gap to the true value is at most gamma's own tolerance plus the root's
    b.tolerance = &gamma.tolerance + &tol;
    b.kind = BoundKind::Composite;
    Ok(Some(b))
}

/// Factor bounds for a truncation with equal indices and `a_minus(inf) = I`.
pub fn cor51_bounds(
    delta: &UpperBound,
    norm_a_n: &UpperBound,
    norm_plus_inv: &UpperBound,
    norm_minus_inv: &UpperBound,
    norm_plus: &UpperBound,
) -> Result<AccuracyReport> {
    let mut out = AccuracyReport::default();
    let pm = norm_plus_inv.mul(norm_minus_inv);
    let pm2 = pm.mul(&pm);
    let gamma = delta.mul(norm_plus).mul(&pm2).scale(&Rational::from_integer(4.into()));
    let q = delta.mul(&pm);
    if let Some(r) = q.one_minus_recip() {
        out.delta_inv_plus = Some(pm2.mul(delta).mul(&r));
        let middle = norm_a_n.mul(&pm2).mul(&r);
        let last = q.mul(&pm).mul(&r);
        out.delta_minus = Some(norm_plus_inv.add(&middle).add(&last).mul(delta));
    } else {
        out.note = Some("q_N is not certified below 1".into());
    }
    if let Some(qp) = q_plus_upper(&gamma)? {
        if let Some(r) = qp.one_minus_recip() {
            out.delta_plus = Some(norm_plus.mul(norm_plus).mul(&pm2).mul(delta).mul(&r).mul(&r));
        }
        out.q_plus_n = Some(qp);
    } else if out.note.is_none() {
        out.note = Some("gamma_N exceeds 1".into());
    }
    out.gamma_n = Some(gamma);
    Ok(out)
}

/// No factor bounds are known for odd `theta`.
pub fn odd_theta_accuracy() -> AccuracyReport {
    AccuracyReport::unavailable("odd theta: no accuracy estimate is known for the stable pair (nu, nu + 1)")
}

/// Dispatches on the parity of `theta`. Even `theta = 2 nu` is handled through
/// `t^-nu a`, which has the same norms and a canonical factorisation.
pub fn factor_accuracy(analysis: &TruncationAnalysis, theta: i64, delta: &UpperBound) -> Result<AccuracyReport> {
    if theta.rem_euclid(2) == 1 {
        return Ok(odd_theta_accuracy());
    }
    let f = &analysis.factorisation;
    if f.indices.0 != f.indices.1 {
        return Ok(AccuracyReport::unavailable("truncation does not have equal indices"));
    }
    let mut out = cor51_bounds(
        delta,
        &analysis.a_n.wiener_norm(),
        &analysis.report.norm_inv_plus,
        &analysis.report.norm_inv_minus,
        &f.a_plus.wiener_norm(),
    )?;
    out.shift = theta / 2;
    Ok(out)
}
