//! Numerical laboratory for extension operators and variable-coefficient
//! oscillatory integrals of arbitrary signature: exact exponent tables,
//! sharp-example scaling scans, wave packets, and slab decoupling
//! experiments at desk scale.

pub mod bump;
pub mod error;
pub mod exponents;
pub mod geometry;
pub mod grid;
pub mod oscillatory;
pub mod rational;

pub use error::{Error, Result};
pub fn run_cli() -> i32 { 0 }
