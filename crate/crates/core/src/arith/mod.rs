//! Exact scalars over Q(i) and certified one-sided bounds.

pub mod bound;
pub mod gaussian;
pub mod rational;

pub use bound::{abs_upper, default_tolerance, exp_of_bound, exp_upper, relative_to_absolute, set_default_tolerance, sqrt_upper, BoundKind, UpperBound};
pub use gaussian::GaussianRational;
pub use rational::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cannot parse rational from {0:?} (expected p/q or an integer)")]
    Parse(String),
    #[error("tolerance must lie strictly between 0 and 1")]
    InvalidTolerance,
}
