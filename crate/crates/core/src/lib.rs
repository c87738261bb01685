//! Classical and quantum (r, δ)-locally recoverable codes from BCH,
//! homothetic-BCH and monomial-Cartesian evaluation codes, with exact
//! verification of every reported parameter.

pub mod cli;
pub mod codes;
pub mod cosets;
pub mod error;
pub mod evaluation;
pub mod families;
pub mod galois;
pub mod locality;
pub mod matrix;
pub mod quantum;

pub use error::{Error, Result};
