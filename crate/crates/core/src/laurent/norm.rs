//! Certified upper bounds on the Wiener norm `sum_k ||A_k||_1`, where `||.||_1`
//! is the maximum column sum of entry moduli.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::matrix::LaurentMatrix2;
use super::scalar::LaurentScalar;
use crate::arith::bound::relative_to_absolute;
use crate::arith::rational::exact_sqrt;
use crate::arith::{abs_upper, default_tolerance, GaussianRational, Rational, UpperBound};

/// Upper bound on a Wiener norm.
pub type NormBound = UpperBound;

fn exact_modulus(z: &GaussianRational) -> Option<Rational> {
    if z.im.is_zero() {
        Some(z.re.abs())
    } else if z.re.is_zero() {
        Some(z.im.abs())
    } else {
        exact_sqrt(&z.abs_squared())
    }
}

fn modulus(z: &GaussianRational, per_entry_tol: &Rational) -> UpperBound {
    match exact_modulus(z) {
        Some(r) => UpperBound::exact(r),
        None => abs_upper(z, per_entry_tol).expect("tolerance is positive"),
    }
}

/// Splits an absolute tolerance across the entries whose moduli are irrational.
fn per_entry_tolerance<'a>(values: impl Iterator<Item = &'a GaussianRational>, abs_tol: &Rational) -> Rational {
    let inexact = values.filter(|z| exact_modulus(z).is_none()).count().max(1);
    abs_tol / Rational::from_integer(BigInt::from(inexact))
}

impl LaurentMatrix2 {
    /// Certified upper bound on the Wiener norm, within absolute tolerance `tol`.
    /// Exact whenever every coefficient has a rational modulus.
    pub fn wiener_norm_upper(&self, tol: &Rational) -> NormBound {
        let Some((lo, hi)) = self.support() else {
            return UpperBound::zero();
        };
        let per_entry = per_entry_tolerance(self.entries.iter().flatten().flat_map(|e| e.coeffs().iter()), tol);
        let mut total = UpperBound::zero();
        for k in lo..=hi {
            let c = self.coefficient(k);
            let col = |j: usize| modulus(c.get(0, j), &per_entry).add(&modulus(c.get(1, j), &per_entry));
            total = total.add(&col(0).max(&col(1)));
        }
        total
    }

    /// Wiener norm bound at the default relative tolerance.
    pub fn wiener_norm(&self) -> NormBound {
        let tol = relative_to_absolute(&default_tolerance(), self.wiener_norm_f64());
        self.wiener_norm_upper(&tol)
    }

    /// Floating-point Wiener norm, for reporting and tolerance scaling only.
    pub fn wiener_norm_f64(&self) -> f64 {
        let Some((lo, hi)) = self.support() else {
            return 0.0;
        };
        (lo..=hi)
            .map(|k| {
                let c = self.coefficient(k);
                let col = |j: usize| c.get(0, j).abs_f64() + c.get(1, j).abs_f64();
                col(0).max(col(1))
            })
            .sum()
    }
}

impl LaurentScalar {
    /// Certified upper bound on `sum_k |c_k|`.
    pub fn wiener_norm(&self) -> NormBound {
        let approx: f64 = self.coeffs().iter().map(|c| c.abs_f64()).sum();
        let tol = relative_to_absolute(&default_tolerance(), approx);
        let per_entry = per_entry_tolerance(self.coeffs().iter(), &tol);
        self.coeffs().iter().fold(UpperBound::zero(), |acc, c| acc.add(&modulus(c, &per_entry)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::int;
    use crate::laurent::Mat2;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    #[test]
    fn identity_has_norm_one() {
        assert_eq!(LaurentMatrix2::identity().wiener_norm(), UpperBound::exact(int(1)));
        assert_eq!(LaurentMatrix2::zero().wiener_norm().value, int(0));
    }

    #[test]
    fn hand_column_sums() {
        let m = LaurentMatrix2::new(
            LaurentScalar::one(),
            LaurentScalar::monomial(g(0, 1), -1),
            LaurentScalar::constant(g(5, 0)),
            LaurentScalar::from_coeffs(-1, vec![g(0, 5), g(1, 0)]),
        );
        // t^0 column sums (6, 1); t^-1 column sums (0, 6)
        assert_eq!(m.wiener_norm(), UpperBound::exact(int(12)));
    }

    #[test]
    fn irrational_moduli_are_bounded_above() {
        let m = Mat2::new(g(1, 1), g(0, 0), g(0, 0), g(1, 0)).to_laurent();
        let b = m.wiener_norm();
        assert!(!b.is_exact());
        assert!(&b.value * &b.value >= int(2));
        assert!(b.to_f64() - std::f64::consts::SQRT_2 < 1e-14);
    }
}
