//! The three model problems: exact coefficient streams, majorants and the
//! circles used for them, plus hand-derived closed forms of `delta_N` at the
//! default parameters.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};
use serde::Serialize;

use crate::arith::rational::{int, rat};
use crate::arith::{GaussianRational, Rational};
use crate::error::{Error, Result};
use crate::tail::{AnnulusModel, BoundContext, CoefficientStream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyId {
    Ex61,
    Ex62,
    Ex63,
}

impl FromStr for FamilyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ex61" => Ok(Self::Ex61),
            "ex62" => Ok(Self::Ex62),
            "ex63" => Ok(Self::Ex63),
            _ => Err(Error::InvalidParameter(format!("unknown family {s:?}"))),
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ex61 => "ex61",
            Self::Ex62 => "ex62",
            Self::Ex63 => "ex63",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExampleFamily {
    pub id: FamilyId,
    pub k1: GaussianRational,
    pub k2: GaussianRational,
    pub theta: i64,
    pub model: AnnulusModel,
    /// The circles the reference tables were computed on.
    pub default_zeta: BoundContext,
}

/// `alpha_plus = k2 sqrt(1 - t^2/k2^2)`, `beta_minus = (i/t) sqrt(1 - k1^2/t^2)`,
/// `theta = 0`. Both circles `|t| = k1` and `|t| = k2` are admissible.
pub fn ex61_streams(k1: Rational, k2: Rational) -> Result<ExampleFamily> {
    if !(k1.is_positive() && k1 < Rational::one() && k2 > Rational::one()) {
        return Err(Error::InvalidParameter("need 0 < k1 < 1 < k2".into()));
    }
    let model = AnnulusModel::new(CoefficientStream::sqrt_plus(k2.clone())?, CoefficientStream::sqrt_minus(k1.clone())?, 0)?;
    Ok(ExampleFamily {
        id: FamilyId::Ex61,
        default_zeta: BoundContext::new(k1.clone(), k2.clone()),
        k1: k1.into(),
        k2: k2.into(),
        theta: 0,
        model,
    })
}

/// `alpha_plus = e^(k2 t)`, `beta_minus = (k1^2 + t^2)^(-1/2)`, `theta = 2 nu`.
pub fn ex62_streams(k1: Rational, k2: GaussianRational, nu: i64) -> Result<ExampleFamily> {
    if !(k1.is_positive() && k1 < Rational::one()) {
        return Err(Error::InvalidParameter("need 0 < k1 < 1".into()));
    }
    let model = AnnulusModel::new(CoefficientStream::exp_plus(k2.clone()), CoefficientStream::inv_sqrt_minus(k1.clone())?, 2 * nu)?;
    let quarter = rat(1, 4);
    let zeta1 = if k1 < quarter { quarter } else { (&k1 + Rational::one()) / int(2) };
    Ok(ExampleFamily {
        id: FamilyId::Ex62,
        k1: k1.into(),
        k2,
        theta: 2 * nu,
        model,
        default_zeta: BoundContext::new(zeta1, int(4)),
    })
}

/// `alpha_plus = e^(k2 t)`, `beta_minus = t^-1 e^(k1/t)`; meant for odd `theta`.
pub fn ex63_streams(k1: GaussianRational, k2: GaussianRational, theta: i64) -> Result<ExampleFamily> {
    let model = AnnulusModel::new(CoefficientStream::exp_plus(k2.clone()), CoefficientStream::exp_minus(k1.clone()), theta)?;
    Ok(ExampleFamily { id: FamilyId::Ex63, k1, k2, theta, model, default_zeta: BoundContext::new(rat(1, 10), int(10)) })
}

impl ExampleFamily {
    /// The family with the parameters of the reference tables.
    pub fn reference(id: FamilyId) -> Self {
        let built = match id {
            FamilyId::Ex61 => ex61_streams(rat(1, 5), int(5)),
            FamilyId::Ex62 => ex62_streams(rat(1, 5), int(1).into(), 3),
            FamilyId::Ex63 => ex63_streams(int(1).into(), rat(1, 2).into(), -7),
        };
        built.expect("reference parameters are valid")
    }

    fn is_reference(&self) -> bool {
        let r = Self::reference(self.id);
        self.k1 == r.k1 && self.k2 == r.k2 && self.theta == r.theta && self.default_zeta == r.default_zeta
    }

    /// Closed form of `delta_N` at the reference parameters and circles, worked
    /// out by hand from the majorants; `None` for other parameters.
    pub fn closed_form_delta(&self, n: u64) -> Option<f64> {
        if !self.is_reference() {
            return None;
        }
        let n = n as i32;
        let e = std::f64::consts::E;
        Some(match self.id {
            FamilyId::Ex61 => (15.0 + 2.0 * 2f64.sqrt()) / 4.0 * 5f64.powi(1 - n),
            FamilyId::Ex62 => (109.0 * e.powi(4) + 60.0) / 27.0 * 4f64.powi(-n),
            FamilyId::Ex63 => {
                (10.0 * e.powi(10) / 9.0 + 110.0 * e.powi(15) / 81.0 + e.powi(5) / 9.0) * 10f64.powi(-n)
            }
        })
    }

    pub fn describe(&self) -> String {
        format!(
            "family={} k1={} k2={} theta={} zeta1={} zeta2={}",
            self.id, self.k1, self.k2, self.theta, self.default_zeta.zeta1, self.default_zeta.zeta2
        )
    }
}
