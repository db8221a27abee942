//! Truncations `a_N` of a matrix function given by coefficient streams, and
//! certified bounds on the truncation error `||a - a_N||_W`.

pub mod delta;
pub mod optimize;
pub mod stream;

pub use delta::{delta_n, delta_n_f64, delta_n_with_tolerance, truncate, truncation_distance, AnnulusModel, BoundContext};
pub use optimize::{optimize_zeta, GridSpec, ZetaChoice};
pub use stream::{tail_norm_bounds, CoefficientStream, Generator, Majorant, Radius, Side, TailBounds};
