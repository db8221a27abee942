//! Factorisation by column reduction.
//!
//! With `q` chosen so `P = t^q a` is a matrix polynomial, unimodular column
//! operations `M = P U` bring `P` to column-reduced form: the leading column
//! coefficient vectors are independent. If the column degrees are `c1, c2`
//! then `M diag(t^-c1, t^-c2)` is minus-type with invertible value at
//! infinity, its determinant is constant because `c1 + c2 = deg det P`, and
//!
//! `a = [M diag(t^-c)] diag(t^(c1-q), t^(c2-q)) U^-1`.
//!
//! The result is always checked exactly before it is returned.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::verify::verify_factorisation;
use super::{FactorisationResult, Normalisation};
use crate::error::{Error, Result};
use crate::laurent::intpoly::{common_denominator, gmul, is_zero_gi, IntPoly};
use crate::laurent::{monomial_winding, LaurentMatrix2};

/// A column of `M` stacked over the matching column of `U`.
type Column = [IntPoly; 4];

fn column_degree(col: &Column) -> Option<i64> {
    col[0].degree().into_iter().chain(col[1].degree()).max()
}

/// Divides out the integer content shared by all coefficients of the column.
fn make_primitive(col: &mut Column) {
    let mut g = BigInt::zero();
    for p in col.iter() {
        for (re, im) in &p.coeffs {
            g = g.gcd(re).gcd(im);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() {
        return;
    }
    for p in col.iter_mut() {
        for c in p.coeffs.iter_mut() {
            c.0 /= &g;
            c.1 /= &g;
        }
    }
}

/// Column-reduces a matrix polynomial. Returns `(M, U, degrees)` with `M = P U`
/// and `det U` a nonzero constant.
///
/// Works fraction-free on Gaussian integer columns: cancelling a leading term
/// cross-multiplies by the two leading coefficients, then the column's integer
/// content is removed. Rational arithmetic on the same steps spends most of its
/// time reducing fractions whose size grows linearly with the degree.
fn column_reduce(p: &LaurentMatrix2) -> Result<(LaurentMatrix2, LaurentMatrix2, [i64; 2])> {
    let mut cols: Vec<Column> = (0..2)
        .map(|j| {
            let den = common_denominator([&p.entries[0][j], &p.entries[1][j]]);
            let unit = |on: bool| if on { IntPoly::constant((den.clone(), BigInt::zero())) } else { IntPoly::zero() };
            [IntPoly::scaled_from(&p.entries[0][j], &den), IntPoly::scaled_from(&p.entries[1][j], &den), unit(j == 0), unit(j == 1)]
        })
        .collect();
    cols.iter_mut().for_each(make_primitive);
    loop {
        let (Some(c0), Some(c1)) = (column_degree(&cols[0]), column_degree(&cols[1])) else {
            return Err(Error::NotMonomialDet("matrix is singular".into()));
        };
        let h0 = [cols[0][0].coeff(c0), cols[0][1].coeff(c0)];
        let h1 = [cols[1][0].coeff(c1), cols[1][1].coeff(c1)];
        let a = gmul(&h0[0], &h1[1]);
        let b = gmul(&h0[1], &h1[0]);
        if a != b {
            let one = BigInt::one();
            let to_matrix = |k: usize| LaurentMatrix2::from_fn(|i, j| cols[j][k + i].over(&one));
            return Ok((to_matrix(0), to_matrix(2), [c0, c1]));
        }
        // Dependent leading vectors: cancel the leading term of the higher column.
        let (low, high, hl, hh, dl, dh) = if c0 <= c1 { (0, 1, h0, h1, c0, c1) } else { (1, 0, h1, h0, c1, c0) };
        let i = if is_zero_gi(&hl[0]) { 1 } else { 0 };
        let (ca, cb) = (&hl[i], &hh[i]);
        let updated: Column = std::array::from_fn(|k| cols[high][k].cross(ca, &cols[low][k], cb, dh - dl));
        cols[high] = updated;
        make_primitive(&mut cols[high]);
    }
}

/// Raw right factorisation of a Laurent matrix polynomial with determinant `c t^theta`.
pub fn right_factorise(a: &LaurentMatrix2) -> Result<FactorisationResult> {
    let (_, theta) = monomial_winding(&a.det())?;
    let lo = a.support().map_or(0, |s| s.0);
    let q = (-lo).max(0);
    let p = a.shift(q);
    let (m, u, c) = column_reduce(&p)?;
    let mut a_minus = LaurentMatrix2::from_fn(|i, j| m.entries[i][j].shift(-c[j]));
    let mut a_plus = u.invert_unimodular()?;
    let mut indices = (c[0] - q, c[1] - q);
    if indices.0 > indices.1 {
        a_minus = a_minus.swap_columns();
        a_plus = a_plus.swap_rows();
        indices = (indices.1, indices.0);
    }
    let result = FactorisationResult { a_minus, indices, a_plus, normalisation: Normalisation::Raw };
    let report = verify_factorisation(a, &result);
    if !report.all_pass() {
        return Err(Error::VerificationFailed(report.summary()));
    }
    debug_assert_eq!(indices.0 + indices.1, theta);
    Ok(result)
}
