//! Comparison of exact factor coefficients with a printed decimal listing.
//!
//! Listing format, one coefficient per line:
//! `entry,power,re,im` with `entry` as `11`, `12`, `21` or `22`. Lines starting
//! with `#` are comments; blank parts are zero.

use num_bigint::BigInt;
use num_traits::Zero;

use super::families::ExampleFamily;
use crate::arith::{GaussianRational, Rational};
use crate::criterion::{analyse_truncation, ZetaMode};
use crate::error::{Error, Result};
use crate::laurent::LaurentMatrix2;
use crate::normalise::NormaliseMode;
use crate::tail::Side;

/// Exact value of a printed decimal such as `-0.1000500140e-1`.
pub fn parse_decimal(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::InvalidParameter(format!("not a decimal: {text:?}"));
    if s.is_empty() {
        return Ok(Rational::zero());
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() || !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let int: BigInt = format!("{whole}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    let mut value = Rational::from_integer(int);
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if neg { -value } else { value })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ListedCoefficient {
    pub entry: (usize, usize),
    pub power: i64,
    pub value: GaussianRational,
}

pub fn parse_listing(text: &str) -> Result<Vec<ListedCoefficient>> {
    let mut out = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).skip(1) {
        let bad = || Error::InvalidParameter(format!("bad listing line {line:?}"));
        let parts: Vec<&str> = line.split(',').collect();
        let [entry, power, re, im] = parts[..] else { return Err(bad()) };
        let entry = match entry {
            "11" => (0, 0),
            "12" => (0, 1),
            "21" => (1, 0),
            "22" => (1, 1),
            _ => return Err(bad()),
        };
        let power = power.parse().map_err(|_| bad())?;
        out.push(ListedCoefficient { entry, power, value: GaussianRational::new(parse_decimal(re)?, parse_decimal(im)?) });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientCheck {
    pub compared: usize,
    pub max_deviation: f64,
    /// Entry and power of the largest deviation.
    pub worst: Option<((usize, usize), i64)>,
    /// Nonzero exact coefficients with no listed counterpart.
    pub unlisted: usize,
}

/// `|exact - listed|` for one coefficient.
pub fn deviation(m: &LaurentMatrix2, c: &ListedCoefficient) -> f64 {
    (&m.get(c.entry.0, c.entry.1).coeff(c.power) - &c.value).abs_f64()
}

pub fn compare_coefficients(m: &LaurentMatrix2, listing: &[ListedCoefficient]) -> CoefficientCheck {
    let mut check = CoefficientCheck { compared: 0, max_deviation: 0.0, worst: None, unlisted: 0 };
    for c in listing {
        let dev = deviation(m, c);
        if check.worst.is_none() || dev > check.max_deviation {
            check.max_deviation = dev;
            check.worst = Some((c.entry, c.power));
        }
        check.compared += 1;
    }
    for i in 0..2 {
        for j in 0..2 {
            for (k, z) in m.get(i, j).terms() {
                if !z.is_zero() && !listing.iter().any(|c| c.entry == (i, j) && c.power == k) {
                    check.unlisted += 1;
                }
            }
        }
    }
    check
}

/// Normalised factor of `a_n` for the family at its reference circles, checked
/// against a listing.
pub fn factor_coefficient_check(family: &ExampleFamily, n: u64, side: Side, listing: &[ListedCoefficient]) -> Result<CoefficientCheck> {
    let zeta = ZetaMode::Fixed(family.default_zeta.clone());
    let analysis = analyse_truncation(&family.model, n, &zeta, NormaliseMode::Auto)?;
    let f = &analysis.factorisation;
    Ok(compare_coefficients(if side == Side::Minus { &f.a_minus } else { &f.a_plus }, listing))
}
