//! Exact right Wiener-Hopf factorisation `a = a_minus * diag(t^r1, t^r2) * a_plus`
//! of 2x2 Laurent matrix polynomials with monomial determinant.

pub mod factorise;
pub mod kernel;
pub mod verify;

use serde::Serialize;

use crate::laurent::LaurentMatrix2;

pub use factorise::right_factorise;
pub use kernel::{expected_dimension, index_dimension_profile, kernel_slice, KernelSlice};
pub use verify::{verify_factorisation, VerificationReport};

/// Which uniqueness condition the factors satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalisation {
    Raw,
    MinusAtInfinityIdentity,
    I2,
    J2,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorisationResult {
    pub a_minus: LaurentMatrix2,
    pub indices: (i64, i64),
    pub a_plus: LaurentMatrix2,
    pub normalisation: Normalisation,
}

impl FactorisationResult {
    /// Partial indices differ by at most one.
    pub fn is_stable(&self) -> bool {
        self.indices.1 - self.indices.0 <= 1
    }

    pub fn middle(&self) -> LaurentMatrix2 {
        LaurentMatrix2::diag_powers(self.indices.0, self.indices.1)
    }

    /// `a_minus * diag * a_plus`.
    pub fn reassemble(&self) -> LaurentMatrix2 {
        &(&self.a_minus * &self.middle()) * &self.a_plus
    }
}
