//! Helpers around [`BigRational`], the exact scalar type used everywhere.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ArithError;

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `10^-k` as an exact rational.
pub fn pow10_neg(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(10u32).pow(k))
}

/// Parses `[-]num/den` or `[-]num`. Decimal points and exponents are rejected so
/// that no float ever enters through a text boundary.
pub fn parse_rational(text: &str) -> Result<Rational, ArithError> {
    let s = text.trim();
    let bad = || ArithError::Parse(text.to_string());
    if s.is_empty() || s.contains(['.', 'e', 'E']) {
        return Err(bad());
    }
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = n.parse().map_err(|_| bad())?;
    let den: BigInt = d.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(ArithError::DivisionByZero);
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `num/den`, or just `num` when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() && (v != 0.0 || r.is_zero()) {
            return v;
        }
    }
    // Very large or very small magnitudes: go through the decimal exponent.
    let (mantissa, exp) = decimal_parts(r, 17);
    mantissa as f64 * 10f64.powi(exp as i32)
}

/// Floor of log10(|r|) for r != 0.
pub fn floor_log10(r: &Rational) -> i64 {
    assert!(!r.is_zero());
    let num = r.numer().abs();
    let den = r.denom().clone();
    // Estimate from bit lengths, then correct.
    let est = ((num.bits() as f64 - den.bits() as f64) * std::f64::consts::LOG10_2).floor() as i64;
    let mut e = est;
    let ten = BigInt::from(10);
    let ge_pow = |e: i64| -> bool {
        // |r| >= 10^e
        if e >= 0 {
            num >= &den * ten.pow(e as u32)
        } else {
            &num * ten.pow((-e) as u32) >= den
        }
    };
    while !ge_pow(e) {
        e -= 1;
    }
    while ge_pow(e + 1) {
        e += 1;
    }
    e
}

/// Rounds |r| to `digits` significant decimal digits (half away from zero) and
/// returns (signed integer mantissa with `digits` digits, decimal exponent of
/// the mantissa's last digit).
fn decimal_parts(r: &Rational, digits: u32) -> (i128, i64) {
    if r.is_zero() {
        return (0, 0);
    }
    let e = floor_log10(r);
    let shift = digits as i64 - 1 - e;
    let scaled = if shift >= 0 {
        r * Rational::from_integer(BigInt::from(10).pow(shift as u32))
    } else {
        r / Rational::from_integer(BigInt::from(10).pow((-shift) as u32))
    };
    let abs = scaled.abs();
    let twice = &abs + &abs;
    // round half up on |scaled|
    let rounded = (twice.numer() + twice.denom()).div_floor(&(twice.denom() * BigInt::from(2)));
    let mut m = rounded.to_i128().unwrap_or(i128::MAX);
    let mut exp = -shift;
    if m >= 10i128.pow(digits) {
        m /= 10;
        exp += 1;
    }
    if r.is_negative() {
        m = -m;
    }
    (m, exp)
}

/// Scientific text with `digits` significant digits, e.g. `3.252250175e-1`.
pub fn format_sig(r: &Rational, digits: u32) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let (m, exp) = decimal_parts(r, digits);
    let sign = if m < 0 { "-" } else { "" };
    let s = m.unsigned_abs().to_string();
    let lead_exp = exp + s.len() as i64 - 1;
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    if tail.is_empty() {
        format!("{sign}{head}e{lead_exp}")
    } else {
        format!("{sign}{head}.{tail}e{lead_exp}")
    }
}

/// Rounds `r` to `digits` significant digits and returns the rounded value as a rational.
pub fn round_sig(r: &Rational, digits: u32) -> Rational {
    if r.is_zero() {
        return Rational::zero();
    }
    let (m, exp) = decimal_parts(r, digits);
    let m = Rational::from_integer(BigInt::from(m));
    if exp >= 0 {
        m * Rational::from_integer(BigInt::from(10).pow(exp as u32))
    } else {
        m / Rational::from_integer(BigInt::from(10).pow((-exp) as u32))
    }
}

/// Smallest rational of the form `k / 2^bits_below` (k integer) that is `>= r`,
/// where `bits_below` is chosen so the result keeps about `precision_bits`
/// significant bits. Used to stop denominators from growing inside bound chains.
pub fn round_up_bits(r: &Rational, precision_bits: u64) -> Rational {
    if r.is_zero() {
        return Rational::zero();
    }
    let mag = r.numer().bits() as i64 - r.denom().bits() as i64;
    let frac_bits = precision_bits as i64 - mag;
    if frac_bits <= 0 {
        // Integer grid is fine enough; ceil.
        let c = r.numer().div_ceil(r.denom());
        return Rational::from_integer(c);
    }
    let scale = BigInt::one() << (frac_bits as usize);
    let scaled = r.numer() * &scale;
    let c = scaled.div_ceil(r.denom());
    Rational::new(c, scale)
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn exact_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

pub fn is_nonnegative(r: &Rational) -> bool {
    r.numer().sign() != Sign::Minus
}

pub fn max_rational(a: Rational, b: Rational) -> Rational {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn pow_i(r: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(r.clone(), e as usize)
    } else {
        num_traits::pow(r.recip(), (-e) as usize)
    }
}

pub fn rational_from_f64_grid(x: f64, denom_bits: u32) -> Rational {
    let scale = (1u64 << denom_bits) as f64;
    let k = (x * scale).round() as i64;
    Rational::new(BigInt::from(k), BigInt::one() << denom_bits as usize)
}
