pub mod accuracy;
pub mod arith;
pub mod cli;
pub mod criterion;
pub mod engine;
pub mod error;
pub mod harness;
pub mod io;
pub mod laurent;
pub mod normalise;
pub mod reduction;
pub mod tail;

pub use error::{Error, Result};
