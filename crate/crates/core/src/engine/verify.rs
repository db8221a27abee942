use serde::Serialize;

use super::FactorisationResult;
use crate::laurent::{monomial_winding, LaurentMatrix2};

/// Outcome of the four exact checks on a candidate factorisation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub product_identity: bool,
    pub supports: bool,
    pub constant_determinants: bool,
    pub index_sum: bool,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.product_identity && self.supports && self.constant_determinants && self.index_sum
    }

    pub fn summary(&self) -> String {
        let mut failed = Vec::new();
        if !self.product_identity {
            failed.push("product identity");
        }
        if !self.supports {
            failed.push("factor supports");
        }
        if !self.constant_determinants {
            failed.push("constant determinants");
        }
        if !self.index_sum {
            failed.push("index sum");
        }
        if failed.is_empty() {
            "all checks pass".into()
        } else {
            format!("failed: {}", failed.join(", "))
        }
    }
}

pub fn verify_factorisation(a: &LaurentMatrix2, r: &FactorisationResult) -> VerificationReport {
    let theta = monomial_winding(&a.det()).ok().map(|(_, th)| th);
    VerificationReport {
        product_identity: (&r.a_minus * &r.middle()).product_equals(&r.a_plus, a),
        supports: r.a_minus.is_minus_type() && r.a_plus.is_plus_type(),
        constant_determinants: r.a_minus.has_constant_det() && r.a_plus.has_constant_det(),
        index_sum: r.indices.0 <= r.indices.1 && theta == Some(r.indices.0 + r.indices.1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::GaussianRational;
    use crate::engine::{right_factorise, Normalisation};
    use crate::laurent::LaurentScalar;

    fn sample() -> LaurentMatrix2 {
        // diag(t^-1, t) * [[1, t], [0, 1]]
        let upper = LaurentMatrix2::new(LaurentScalar::one(), LaurentScalar::power(1), LaurentScalar::zero(), LaurentScalar::one());
        &LaurentMatrix2::diag_powers(-1, 1) * &upper
    }

    #[test]
    fn valid_result_passes() {
        let a = sample();
        let r = right_factorise(&a).unwrap();
        assert!(verify_factorisation(&a, &r).all_pass());
    }

    #[test]
    fn swapped_factors_fail_support_check() {
        let a = sample();
        let upper = LaurentMatrix2::new(LaurentScalar::one(), LaurentScalar::power(1), LaurentScalar::zero(), LaurentScalar::one());
        let swapped = FactorisationResult {
            a_minus: upper,
            indices: (-1, 1),
            a_plus: LaurentMatrix2::identity(),
            normalisation: Normalisation::Raw,
        };
        let rep = verify_factorisation(&a, &swapped);
        assert!(!rep.supports);
        assert!(!rep.all_pass());
    }

    #[test]
    fn tampered_coefficient_fails_product_check() {
        let a = sample();
        let mut r = right_factorise(&a).unwrap();
        let bump = LaurentScalar::constant(GaussianRational::from_ints(0, 1));
        r.a_plus.entries[1][0] = &r.a_plus.entries[1][0] + &bump;
        let rep = verify_factorisation(&a, &r);
        assert!(!rep.product_identity);
        assert!(rep.summary().contains("product identity"));
    }
}
