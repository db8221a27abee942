//! Stream specifications read from JSON.
//!
//! ```json
//! {"family": "ex61", "k1": "1/5", "k2": "5"}
//! {"family": "finite", "theta": 1, "plus": [{"re": "2", "im": "0"}], "minus": [], "zeta1": "1/2", "zeta2": "2"}
//! ```
//!
//! Every number is an exact rational string; decimals are rejected.

use num_traits::Zero;
use serde::Deserialize;

use crate::arith::{parse_rational, GaussianRational, Rational};
use crate::error::{Error, Result};
use crate::harness::{ex61_streams, ex62_streams, ex63_streams, ExampleFamily};
use crate::tail::{AnnulusModel, BoundContext, CoefficientStream, Majorant, Radius, Side};

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MajorantSpec {
    /// `sqrt(k_sq + z^2) z^power`
    SqrtSum { k_sq: String, power: i32 },
    /// `(z^2 - k_sq)^(-1/2)`
    InvSqrtDiff { k_sq: String },
    /// `e^(|k| z) z^power`, or `e^(|k|/z) z^power` when inverted.
    Exp { k_abs_sq: String, inverted: bool, power: i32 },
}

impl MajorantSpec {
    fn build(&self) -> Result<Majorant> {
        Ok(match self {
            Self::SqrtSum { k_sq, power } => Majorant::SqrtSum { k_sq: parse_rational(k_sq)?, power: *power },
            Self::InvSqrtDiff { k_sq } => Majorant::InvSqrtDiff { k_sq: parse_rational(k_sq)? },
            Self::Exp { k_abs_sq, inverted, power } => {
                Majorant::Exp { k_abs_sq: parse_rational(k_abs_sq)?, inverted: *inverted, power: *power }
            }
        })
    }
}

/// Approximate coefficients with the analytic data that bounds their tails.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserStream {
    pub coeffs: Vec<GaussianRational>,
    /// Per-coefficient error of the listed values.
    pub budget: String,
    /// `r2` (plus side) or `r1` (minus side); absent means infinite / zero.
    pub radius: Option<String>,
    #[serde(default)]
    pub closed: bool,
    pub majorant: MajorantSpec,
}

impl UserStream {
    fn build(&self, side: Side) -> Result<CoefficientStream> {
        let radius = match (&self.radius, side) {
            (Some(r), _) => Radius::Finite(parse_rational(r)?),
            (None, Side::Plus) => Radius::Infinite,
            (None, Side::Minus) => Radius::Finite(Rational::zero()),
        };
        CoefficientStream::approximate(side, self.coeffs.clone(), parse_rational(&self.budget)?, radius, self.closed, self.majorant.build()?)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum StreamSpec {
    Ex61 { k1: String, k2: String },
    Ex62 { k1: String, k2: GaussianText, nu: i64 },
    Ex63 { k1: GaussianText, k2: GaussianText, theta: i64 },
    /// Polynomial data: `plus` from `t^0` upward, `minus` from `t^-1` downward.
    Finite { theta: i64, plus: Vec<GaussianRational>, minus: Vec<GaussianRational> },
    User { theta: i64, plus: UserStream, minus: UserStream },
}

/// A real rational `"p/q"` or a full `{"re": .., "im": ..}` object.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum GaussianText {
    Real(String),
    Complex(GaussianRational),
}

impl GaussianText {
    fn value(&self) -> Result<GaussianRational> {
        Ok(match self {
            Self::Real(s) => GaussianRational::real(parse_rational(s)?),
            Self::Complex(z) => z.clone(),
        })
    }
}

#[derive(Clone, Debug, Deserialize)]
struct SpecFile {
    #[serde(flatten)]
    spec: StreamSpec,
    zeta1: Option<String>,
    zeta2: Option<String>,
}

/// A model ready for the criterion.
#[derive(Clone, Debug)]
pub struct Problem {
    pub label: String,
    pub model: AnnulusModel,
    /// Circles given in the file, or the family's reference circles.
    pub zeta: Option<BoundContext>,
    pub family: Option<ExampleFamily>,
}

impl StreamSpec {
    pub fn build(&self) -> Result<Problem> {
        let from_family = |f: ExampleFamily| Problem {
            label: f.describe(),
            model: f.model.clone(),
            zeta: Some(f.default_zeta.clone()),
            family: Some(f),
        };
        Ok(match self {
            Self::Ex61 { k1, k2 } => from_family(ex61_streams(parse_rational(k1)?, parse_rational(k2)?)?),
            Self::Ex62 { k1, k2, nu } => from_family(ex62_streams(parse_rational(k1)?, k2.value()?, *nu)?),
            Self::Ex63 { k1, k2, theta } => from_family(ex63_streams(k1.value()?, k2.value()?, *theta)?),
            Self::Finite { theta, plus, minus } => Problem {
                label: format!("finite streams, theta={theta}"),
                model: AnnulusModel::new(
                    CoefficientStream::finite(Side::Plus, plus.clone()),
                    CoefficientStream::finite(Side::Minus, minus.clone()),
                    *theta,
                )?,
                zeta: None,
                family: None,
            },
            Self::User { theta, plus, minus } => Problem {
                label: format!("user streams, theta={theta}"),
                model: AnnulusModel::new(plus.build(Side::Plus)?, minus.build(Side::Minus)?, *theta)?,
                zeta: None,
                family: None,
            },
        })
    }
}

pub fn parse_stream_spec(text: &str) -> Result<Problem> {
    let file: SpecFile = serde_json::from_str(text)?;
    let mut problem = file.spec.build()?;
    match (file.zeta1, file.zeta2) {
        (Some(z1), Some(z2)) => problem.zeta = Some(BoundContext::new(parse_rational(&z1)?, parse_rational(&z2)?)),
        (None, None) => {}
        _ => return Err(Error::InvalidParameter("give both zeta1 and zeta2 or neither".into())),
    }
    Ok(problem)
}
