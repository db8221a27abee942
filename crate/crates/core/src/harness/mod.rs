//! Reference problems and reproduction of the published tables.

pub mod families;
pub mod listing;
pub mod reproduce;

pub use families::{ex61_streams, ex62_streams, ex63_streams, ExampleFamily, FamilyId};
pub use reproduce::{plot_series, reproduce, tables, write_reproduction, OrderRow, Provenance, ReproduceConfig, Reproduction};
pub use listing::{compare_coefficients, deviation, factor_coefficient_check, parse_decimal, parse_listing, CoefficientCheck, ListedCoefficient};
