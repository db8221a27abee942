//! Laurent polynomials and 2x2 Laurent matrix polynomials over Q(i).

pub(crate) mod intpoly;
pub mod matrix;
pub mod norm;
pub mod scalar;

pub use matrix::{monomial_winding, LaurentMatrix2, Mat2};
pub use norm::NormBound;
pub use scalar::LaurentScalar;
