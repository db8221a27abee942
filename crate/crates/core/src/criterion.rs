//! Certificate that the full matrix function has a stable factorisation: some
//! truncation `a_N` factorises with the stable index pattern and
//! `q_N = sigma * delta_N * ||(a_plus^(N))^-1||_W * ||(a_minus^(N))^-1||_W < 1`.

use std::fmt;

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::rational::format_sig;
use crate::arith::{Rational, UpperBound};
use crate::engine::{right_factorise, FactorisationResult};
use crate::error::{Error, Result};
use crate::laurent::{LaurentMatrix2, NormBound};
use crate::normalise::{p_normalise_factors_of, NormaliseMode};
use crate::reduction::stable_pattern;
use crate::tail::{delta_n, optimize_zeta, truncate, AnnulusModel, BoundContext, GridSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    CertifiedStable,
    NotCertified,
    UnstableTruncation,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CertifiedStable => "CERTIFIED_STABLE",
            Verdict::NotCertified => "NOT_CERTIFIED",
            Verdict::UnstableTruncation => "UNSTABLE_TRUNCATION",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub n: u64,
    #[serde(serialize_with = "ser_bound")]
    pub delta_n: UpperBound,
    #[serde(serialize_with = "ser_bound")]
    pub norm_inv_plus: NormBound,
    #[serde(serialize_with = "ser_bound")]
    pub norm_inv_minus: NormBound,
    pub sigma: u32,
    #[serde(serialize_with = "ser_bound")]
    pub q_n: UpperBound,
    pub indices: (i64, i64),
    pub verdict: Verdict,
    #[serde(with = "crate::arith::gaussian::rational_text")]
    pub zeta1: Rational,
    #[serde(with = "crate::arith::gaussian::rational_text")]
    pub zeta2: Rational,
}

/// Bounds go out as their exact rational value plus a 10-digit decimal.
pub(crate) fn ser_bound<S: serde::Serializer>(b: &UpperBound, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("UpperBound", 4)?;
    st.serialize_field("value", &b.value.to_string())?;
    st.serialize_field("decimal", &format_sig(&b.value, 10))?;
    st.serialize_field("tolerance", &format_sig(&b.tolerance, 3))?;
    st.serialize_field("kind", &b.kind)?;
    st.end()
}

pub const CSV_HEADER: &str = "N,delta_N,norm_inv_plus,norm_inv_minus,sigma,q_N,rho1,rho2,verdict";

impl CriterionReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.n,
            format_sig(&self.delta_n.value, 10),
            format_sig(&self.norm_inv_plus.value, 10),
            format_sig(&self.norm_inv_minus.value, 10),
            self.sigma,
            format_sig(&self.q_n.value, 10),
            self.indices.0,
            self.indices.1,
            self.verdict
        )
    }
}

/// `||d_r||_W` for the stable pattern: 1 for even `theta`, 2 for odd.
pub fn sigma_of(theta: i64) -> u32 {
    if theta.rem_euclid(2) == 0 {
        1
    } else {
        2
    }
}

pub fn q_n(delta: &UpperBound, norm_inv_plus: &UpperBound, norm_inv_minus: &UpperBound, sigma: u32) -> UpperBound {
    delta.mul(norm_inv_plus).mul(norm_inv_minus).scale(&Rational::from_integer(sigma.into()))
}

/// How the circles for `delta_N` are chosen.
#[derive(Clone, Debug, PartialEq)]
pub enum ZetaMode {
    Fixed(BoundContext),
    Optimize { epsilon: Rational, grid: GridSpec },
}

/// Everything computed for one truncation order.
#[derive(Clone, Debug)]
pub struct TruncationAnalysis {
    pub a_n: LaurentMatrix2,
    /// Normalised when the indices are stable, raw otherwise.
    pub factorisation: FactorisationResult,
    pub report: CriterionReport,
}

pub fn analyse_truncation(model: &AnnulusModel, n: u64, zeta: &ZetaMode, mode: NormaliseMode) -> Result<TruncationAnalysis> {
    let a_n = truncate(model, n)?;
    let raw = right_factorise(&a_n)?;
    let stable = raw.indices == stable_pattern(model.theta);
    let factorisation = if stable { p_normalise_factors_of(&a_n, &raw, mode)? } else { raw };
    let (delta, zeta1, zeta2) = match zeta {
        ZetaMode::Fixed(ctx) => (delta_n(model, n, ctx)?, ctx.zeta1.clone(), ctx.zeta2.clone()),
        ZetaMode::Optimize { epsilon, grid } => {
            let c = optimize_zeta(model, n, epsilon, grid)?;
            (c.delta, c.zeta1, c.zeta2)
        }
    };
    let norm_inv_plus = factorisation.a_plus.invert_unimodular()?.wiener_norm();
    let norm_inv_minus = factorisation.a_minus.invert_unimodular()?.wiener_norm();
    let sigma = sigma_of(model.theta);
    let q = q_n(&delta, &norm_inv_plus, &norm_inv_minus, sigma);
    let verdict = if !stable {
        Verdict::UnstableTruncation
    } else if q.certifies_below(&Rational::one()) {
        Verdict::CertifiedStable
    } else {
        Verdict::NotCertified
    };
    let report = CriterionReport {
        n,
        delta_n: delta,
        norm_inv_plus,
        norm_inv_minus,
        sigma,
        q_n: q,
        indices: factorisation.indices,
        verdict,
        zeta1,
        zeta2,
    };
    Ok(TruncationAnalysis { a_n, factorisation, report })
}

/// Runs the criterion for every order in `orders`, `jobs` orders at a time.
/// Results come back in the order of `orders` regardless of `jobs`.
pub fn certify_stability(
    model: &AnnulusModel,
    orders: &[u64],
    zeta: &ZetaMode,
    mode: NormaliseMode,
    jobs: usize,
) -> Result<Vec<TruncationAnalysis>> {
    if jobs <= 1 {
        return orders.iter().map(|&n| analyse_truncation(model, n, zeta, mode)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    pool.install(|| orders.par_iter().map(|&n| analyse_truncation(model, n, zeta, mode)).collect())
}

/// The first order whose verdict is a certificate.
pub fn first_certified(reports: &[CriterionReport]) -> Option<u64> {
    reports.iter().find(|r| r.verdict == Verdict::CertifiedStable).map(|r| r.n)
}
