//! Quantum hypothesis testing: exponent functions, pinching-based tests,
//! and exact finite-n verification of their error bounds.

pub mod error;
pub mod exponents;
pub mod finite_n;
pub mod format;
pub mod grid;
pub mod operator;
pub mod presets;
pub mod sampling;
pub mod suite;

pub use error::{Error, Result};
