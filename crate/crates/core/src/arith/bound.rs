//! One-sided (upper) bounds for irrational quantities, carried as exact rationals.
//!
//! Every [`UpperBound`] satisfies `true <= value <= true + tolerance`. Only
//! nonnegative quantities are combined, so sums and products of upper bounds stay
//! upper bounds; anything subtracted must first be bounded from the other side,
//! which the few call sites that need it do explicitly.

use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::gaussian::GaussianRational;
use super::rational::{exact_sqrt, format_sig, pow10_neg, round_up_bits, to_f64, Rational};
use super::ArithError;

static TOLERANCE: RwLock<Option<Rational>> = RwLock::new(None);

/// Relative tolerance for certified constants: `10^-15` unless overridden.
pub fn default_tolerance() -> Rational {
    let set = TOLERANCE.read().unwrap_or_else(|e| e.into_inner());
    set.clone().unwrap_or_else(|| pow10_neg(15))
}

/// Overrides the relative tolerance process-wide; it must lie in `(0, 1)`.
pub fn set_default_tolerance(tol: Rational) -> Result<(), ArithError> {
    if !tol.is_positive() || tol >= Rational::one() {
        return Err(ArithError::InvalidTolerance);
    }
    *TOLERANCE.write().unwrap_or_else(|e| e.into_inner()) = Some(tol);
    Ok(())
}

/// Working precision (bits) used to keep composite bounds from growing without limit.
const WORKING_BITS: u64 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Exact,
    Sqrt,
    Exp,
    Abs,
    Composite,
}

#[derive(Clone, PartialEq)]
pub struct UpperBound {
    pub value: Rational,
    pub tolerance: Rational,
    pub kind: BoundKind,
}

impl fmt::Debug for UpperBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UpperBound({} ~{:?}, tol {})", format_sig(&self.value, 12), self.kind, format_sig(&self.tolerance, 3))
    }
}

impl UpperBound {
    pub fn exact(value: Rational) -> Self {
        Self { value, tolerance: Rational::zero(), kind: BoundKind::Exact }
    }

    pub fn zero() -> Self {
        Self::exact(Rational::zero())
    }

    pub fn one() -> Self {
        Self::exact(Rational::one())
    }

    pub fn is_exact(&self) -> bool {
        self.tolerance.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.value)
    }

    fn combined_kind(&self, other: &Self) -> BoundKind {
        if self.is_exact() && other.is_exact() {
            BoundKind::Exact
        } else {
            BoundKind::Composite
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            value: &self.value + &other.value,
            tolerance: &self.tolerance + &other.tolerance,
            kind: self.combined_kind(other),
        }
        .tighten()
    }

    pub fn add_exact(&self, r: &Rational) -> Self {
        Self { value: &self.value + r, tolerance: self.tolerance.clone(), kind: self.kind }
    }

    /// Product of two bounds on nonnegative quantities.
    pub fn mul(&self, other: &Self) -> Self {
        debug_assert!(!self.value.is_negative() && !other.value.is_negative());
        let tolerance = &self.value * &other.tolerance + &other.value * &self.tolerance;
        Self { value: &self.value * &other.value, tolerance, kind: self.combined_kind(other) }.tighten()
    }

    /// Multiplies by an exact nonnegative rational.
    pub fn scale(&self, r: &Rational) -> Self {
        debug_assert!(!r.is_negative());
        let kind = if self.is_exact() { BoundKind::Exact } else { self.kind };
        Self { value: &self.value * r, tolerance: &self.tolerance * r, kind }.tighten()
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// The larger of two upper bounds bounds the max of the two quantities.
    pub fn max(&self, other: &Self) -> Self {
        let (hi, lo) = if self.value >= other.value { (self, other) } else { (other, self) };
        let tolerance = if hi.tolerance >= lo.tolerance { hi.tolerance.clone() } else { lo.tolerance.clone() };
        let kind = if tolerance.is_zero() { BoundKind::Exact } else { hi.kind };
        Self { value: hi.value.clone(), tolerance, kind }
    }

    /// Upper bound of `1 / (1 - q)` given an upper bound of `q`. `None` unless the
    /// bound certifies `q < 1`.
    pub fn one_minus_recip(&self) -> Option<Self> {
        let one = Rational::one();
        if self.value >= one {
            return None;
        }
        let gap = &one - &self.value;
        let value = gap.recip();
        let tolerance = &self.tolerance / (&gap * &gap);
        let kind = if self.is_exact() { BoundKind::Exact } else { BoundKind::Composite };
        Some(Self { value, tolerance, kind }.tighten())
    }

    /// Rounds the value up onto a binary grid once the representation gets large.
    pub fn tighten(self) -> Self {
        let size = self.value.numer().bits() + self.value.denom().bits();
        if size <= 2 * WORKING_BITS || self.value.is_zero() {
            return self;
        }
        let rounded = round_up_bits(&self.value, WORKING_BITS);
        let extra = &rounded - &self.value;
        let tol_size = self.tolerance.numer().bits() + self.tolerance.denom().bits();
        let mut tolerance = &self.tolerance + extra;
        if tol_size > 2 * WORKING_BITS {
            tolerance = round_up_bits(&tolerance, 64);
        }
        let kind = if self.kind == BoundKind::Exact { BoundKind::Composite } else { self.kind };
        Self { value: rounded, tolerance, kind }
    }

    /// True when the bound proves the quantity is strictly below `limit`.
    pub fn certifies_below(&self, limit: &Rational) -> bool {
        &self.value < limit
    }
}

/// Absolute tolerance corresponding to a relative tolerance at magnitude `approx`:
/// `rel * 2^floor(log2 approx)`, which never exceeds `rel * approx`.
pub fn relative_to_absolute(rel: &Rational, approx: f64) -> Rational {
    if !approx.is_finite() || approx <= 0.0 {
        return rel.clone();
    }
    let e = approx.log2().floor() as i64;
    let e = e.clamp(-4000, 4000);
    if e >= 0 {
        rel * Rational::from_integer(BigInt::one() << e as usize)
    } else {
        rel / Rational::from_integer(BigInt::one() << (-e) as usize)
    }
}

/// Smallest `k` with `10^-k <= tol`.
fn decimal_digits_for(tol: &Rational) -> u32 {
    assert!(tol.is_positive());
    let mut k = 0u32;
    let mut p = Rational::one();
    let ten = Rational::from_integer(BigInt::from(10));
    while &p > tol {
        p /= &ten;
        k += 1;
    }
    k
}

fn ceil_to_decimal_grid(v: &Rational, k: u32) -> Rational {
    let scale = BigInt::from(10).pow(k);
    let c = (v.numer() * &scale).div_ceil(v.denom());
    Rational::new(c, scale)
}

/// Certified upper bound of `sqrt(q)` within `tol`; exact when `q` is a perfect square.
pub fn sqrt_upper(q: &Rational, tol: &Rational) -> Result<UpperBound, ArithError> {
    if q.is_negative() {
        return Err(ArithError::Domain(format!("square root of negative value {q}")));
    }
    if let Some(r) = exact_sqrt(q) {
        return Ok(UpperBound::exact(r));
    }
    if !tol.is_positive() {
        return Err(ArithError::Domain("tolerance must be positive".into()));
    }
    let k = decimal_digits_for(tol);
    let scale = BigInt::from(10).pow(k);
    // ceil(sqrt(q) * 10^k) = smallest u with u^2 >= q * 10^2k.
    let x_num = q.numer() * &scale * &scale;
    let x_den = q.denom();
    let m = x_num.div_floor(x_den);
    let r = m.sqrt();
    let exact_hit = &r * &r * x_den == x_num;
    let u = if exact_hit { r } else { r + 1 };
    Ok(UpperBound {
        value: Rational::new(u, scale.clone()),
        tolerance: Rational::new(BigInt::one(), scale),
        kind: BoundKind::Sqrt,
    })
}

/// Certified upper bound of `|z|` within `tol`; exact for real, imaginary and
/// Pythagorean inputs.
pub fn abs_upper(z: &GaussianRational, tol: &Rational) -> Result<UpperBound, ArithError> {
    if z.im.is_zero() {
        return Ok(UpperBound::exact(z.re.abs()));
    }
    if z.re.is_zero() {
        return Ok(UpperBound::exact(z.im.abs()));
    }
    let mut b = sqrt_upper(&z.abs_squared(), tol)?;
    if !b.is_exact() {
        b.kind = BoundKind::Abs;
    }
    Ok(b)
}

/// Partial Taylor sum of `e^x` (x > 0) together with a rigorous bound on the
/// remainder, stopping once the remainder falls below `stop(partial_sum)`.
fn exp_taylor(x: &Rational, stop: impl Fn(&Rational) -> Rational) -> (Rational, Rational) {
    let mut sum = Rational::one();
    let mut term = Rational::one();
    let mut n: u64 = 0;
    loop {
        n += 1;
        term = &term * x / Rational::from_integer(BigInt::from(n));
        sum += &term;
        // remainder after the x^n/n! term: sum_{j>n} x^j/j! <= t_{n+1} / (1 - x/(n+2))
        let n2 = Rational::from_integer(BigInt::from(n + 2));
        if x < &n2 {
            let next = &term * x / Rational::from_integer(BigInt::from(n + 1));
            let ratio = Rational::one() - x / &n2;
            let remainder = next / ratio;
            if remainder <= stop(&sum) {
                return (sum, remainder);
            }
        }
    }
}

/// Certified upper bound of `e^x` within `tol`. For `x < 0` the bound is the
/// reciprocal of a lower bound of `e^|x|`.
pub fn exp_upper(x: &Rational, tol: &Rational) -> Result<UpperBound, ArithError> {
    if x.is_zero() {
        return Ok(UpperBound::exact(Rational::one()));
    }
    if !tol.is_positive() {
        return Err(ArithError::Domain("tolerance must be positive".into()));
    }
    // Work well inside the requested tolerance so rounding never eats the budget.
    let target = tol / Rational::from_integer(BigInt::from(1024));
    let k = decimal_digits_for(&target);
    let grid = Rational::new(BigInt::one(), BigInt::from(10).pow(k));
    if x.is_positive() {
        let (sum, rem) = exp_taylor(x, |_| target.clone());
        let raw = &sum + &rem;
        let value = ceil_to_decimal_grid(&raw, k);
        let tolerance = rem + &grid;
        Ok(UpperBound { value, tolerance, kind: BoundKind::Exp })
    } else {
        let y = -x;
        // 1/L - 1/(L+R) <= R / L^2
        let (lower, rem) = exp_taylor(&y, |s| &target * s * s);
        let raw = lower.recip();
        let value = ceil_to_decimal_grid(&raw, k);
        let tolerance = &rem / (&lower * &lower) + &grid;
        Ok(UpperBound { value, tolerance, kind: BoundKind::Exp })
    }
}

/// Upper bound of `e^(rate * x)` where `rate` is itself only known through an
/// upper bound (e.g. a modulus). Monotonicity of exp makes this valid.
pub fn exp_of_bound(rate: &UpperBound, x: &Rational, tol: &Rational) -> Result<UpperBound, ArithError> {
    let arg = &rate.value * x;
    let mut b = exp_upper(&arg, tol)?;
    if !rate.is_exact() {
        // e^{a} - e^{a - d} <= e^a * d for d >= 0
        let d = &rate.tolerance * x.abs();
        b.tolerance = &b.tolerance + &b.value * d;
        b.kind = BoundKind::Composite;
    }
    Ok(b)
}
