//! Normalisation of stable factorisations, which makes the factors unique.
//!
//! Equal indices: the minus factor is scaled so that its value at infinity is
//! the identity. Indices differing by one: with `A0 = a_minus(inf) = L0 U0`
//! (L0 unit lower-triangular) and `A1` the `t^-1` coefficient of `a_minus`,
//!
//! `Q(t) = U0^-1 - (1/(A0)_11) [[0, (A1 U0^-1)_12], [0, 0]] t^-1`
//!
//! and the factors become `a_minus Q` and `D^-1 Q^-1 D a_plus`. The J2 variant
//! runs the same construction on the row-swapped minus factor.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::GaussianRational;
use crate::engine::{verify_factorisation, FactorisationResult, Normalisation};
use crate::error::{Error, Result};
use crate::laurent::{LaurentMatrix2, LaurentScalar, Mat2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum NormaliseMode {
    /// I2 when its pivot is nonzero, otherwise J2.
    #[default]
    Auto,
    I2,
    J2,
    MinusInfinityIdentity,
    Raw,
}

impl std::str::FromStr for NormaliseMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Self::Auto),
            "i2" => Ok(Self::I2),
            "j2" => Ok(Self::J2),
            "minus-infinity-identity" => Ok(Self::MinusInfinityIdentity),
            "raw" => Ok(Self::Raw),
            _ => Err(Error::InvalidParameter(format!("unknown normalisation {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Permutation {
    I2,
    J2,
}

/// `A0 = P L0 U0` with `L0` unit lower-triangular and `P` the identity or the exchange.
#[derive(Clone, Debug, PartialEq)]
pub struct LUPair {
    pub l0: Mat2,
    pub u0: Mat2,
    pub permutation: Permutation,
}

pub fn lu_decompose(a0: &Mat2, permutation: Permutation) -> Result<LUPair> {
    let m = match permutation {
        Permutation::I2 => a0.clone(),
        Permutation::J2 => &Mat2::exchange() * a0,
    };
    let pivot = m.get(0, 0);
    if pivot.is_zero() {
        return Err(Error::NormalisationUnavailable(format!("{permutation:?} pivot is zero")));
    }
    let l21 = m.get(1, 0).checked_div(pivot)?;
    let u22 = m.get(1, 1) - &(&l21 * m.get(0, 1));
    let zero = GaussianRational::zero;
    let l0 = Mat2::new(GaussianRational::one(), zero(), l21, GaussianRational::one());
    let u0 = Mat2::new(pivot.clone(), m.get(0, 1).clone(), zero(), u22);
    Ok(LUPair { l0, u0, permutation })
}

/// `D^-1 X D` for `D = diag(t^r1, t^r2)`.
fn conjugate_by_diag(x: &LaurentMatrix2, indices: (i64, i64)) -> LaurentMatrix2 {
    let s = indices.1 - indices.0;
    let e = &x.entries;
    LaurentMatrix2::new(e[0][0].clone(), e[0][1].shift(s), e[1][0].shift(-s), e[1][1].clone())
}

fn checked(r: FactorisationResult, original: &LaurentMatrix2) -> Result<FactorisationResult> {
    let report = verify_factorisation(original, &r);
    if report.all_pass() {
        Ok(r)
    } else {
        Err(Error::VerificationFailed(report.summary()))
    }
}

fn normalise_equal(r: &FactorisationResult, original: &LaurentMatrix2) -> Result<FactorisationResult> {
    let c = r.a_minus.value_at_infinity()?;
    let c_inv = c.inverse()?;
    checked(
        FactorisationResult {
            a_minus: r.a_minus.mul_const_right(&c_inv),
            indices: r.indices,
            a_plus: r.a_plus.mul_const_left(&c),
            normalisation: Normalisation::MinusAtInfinityIdentity,
        },
        original,
    )
}

fn normalise_adjacent(r: &FactorisationResult, perm: Permutation, original: &LaurentMatrix2) -> Result<FactorisationResult> {
    let permuted = match perm {
        Permutation::I2 => r.a_minus.clone(),
        Permutation::J2 => r.a_minus.mul_const_left(&Mat2::exchange()),
    };
    let a0 = permuted.coefficient(0);
    let a1 = permuted.coefficient(-1);
    let lu = lu_decompose(&r.a_minus.value_at_infinity()?, perm)?;
    let q0 = lu.u0.inverse()?;
    let corr = (&a1 * &q0).get(0, 1).checked_div(a0.get(0, 0))?;
    // Q(t) = Q0 + Q1 t^-1, Q1 = [[0, -corr], [0, 0]]
    let q = LaurentMatrix2::new(
        LaurentScalar::constant(q0.get(0, 0).clone()),
        &LaurentScalar::constant(q0.get(0, 1).clone()) + &LaurentScalar::monomial(-corr, -1),
        LaurentScalar::zero(),
        LaurentScalar::constant(q0.get(1, 1).clone()),
    );
    let q_inv = q.invert_unimodular()?;
    let tag = match perm {
        Permutation::I2 => Normalisation::I2,
        Permutation::J2 => Normalisation::J2,
    };
    checked(
        FactorisationResult {
            a_minus: &r.a_minus * &q,
            indices: r.indices,
            a_plus: &conjugate_by_diag(&q_inv, r.indices) * &r.a_plus,
            normalisation: tag,
        },
        original,
    )
}

/// Normalises a stable factorisation; the result is re-verified exactly.
pub fn p_normalise(r: &FactorisationResult, mode: NormaliseMode) -> Result<FactorisationResult> {
    p_normalise_factors_of(&r.reassemble(), r, mode)
}

/// As [`p_normalise`] for a factorisation already known to multiply out to
/// `original`; the normalised factors are verified against `original`.
pub fn p_normalise_factors_of(original: &LaurentMatrix2, r: &FactorisationResult, mode: NormaliseMode) -> Result<FactorisationResult> {
    let (r1, r2) = r.indices;
    if r2 - r1 > 1 {
        return Err(Error::UnstableIndices(r1, r2));
    }
    if mode == NormaliseMode::Raw {
        return Ok(r.clone());
    }
    if r1 == r2 {
        return normalise_equal(r, original);
    }
    let a0 = r.a_minus.value_at_infinity()?;
    let perm = match mode {
        NormaliseMode::I2 => Permutation::I2,
        NormaliseMode::J2 => Permutation::J2,
        NormaliseMode::Auto if !a0.get(0, 0).is_zero() => Permutation::I2,
        NormaliseMode::Auto => Permutation::J2,
        NormaliseMode::MinusInfinityIdentity => {
            return Err(Error::NormalisationUnavailable("value at infinity cannot be the identity for unequal indices".into()))
        }
        NormaliseMode::Raw => unreachable!(),
    };
    normalise_adjacent(r, perm, original)
}

/// Re-expresses a factorisation through `a_minus H` and `D^-1 H^-1 D a_plus`.
///
/// Admissible `H`: a constant invertible matrix for equal indices, or
/// `[[alpha, x + y/t], [0, delta]]` with `alpha, delta != 0` for adjacent ones.
pub fn ambiguity_twist(r: &FactorisationResult, h: &LaurentMatrix2) -> Result<FactorisationResult> {
    let (r1, r2) = r.indices;
    let bad = |why: &str| Error::InvalidParameter(format!("inadmissible twist: {why}"));
    let diag_ok = |i: usize| h.entries[i][i].as_constant().is_some_and(|c| !c.is_zero());
    match r2 - r1 {
        0 => {
            if h.support().is_some_and(|s| s != (0, 0)) {
                return Err(bad("must be constant for equal indices"));
            }
            if h.coefficient(0).det().is_zero() {
                return Err(bad("singular"));
            }
        }
        1 => {
            let upper_ok = h.entries[0][1].is_zero() || (h.entries[0][1].pmin() >= -1 && h.entries[0][1].pmax() <= Some(0));
            if !(diag_ok(0) && diag_ok(1) && h.entries[1][0].is_zero() && upper_ok) {
                return Err(bad("expected [[alpha, x + y/t], [0, delta]]"));
            }
        }
        _ => return Err(Error::UnstableIndices(r1, r2)),
    }
    let h_inv = h.invert_unimodular()?;
    let twisted = FactorisationResult {
        a_minus: &r.a_minus * h,
        indices: r.indices,
        a_plus: &conjugate_by_diag(&h_inv, r.indices) * &r.a_plus,
        normalisation: Normalisation::Raw,
    };
    checked(twisted, &r.reassemble())
}
