//! Exact finite-n evaluation of the pinched and plain likelihood-ratio
//! tests, their error probabilities, and the polynomial-prefactor bounds.

pub mod bounds;
pub mod conjecture;
pub mod context;
pub mod stein;

pub use bounds::{bound_reports_csv, error_bounds, verify_bounds, BoundReport};
pub use conjecture::{conjecture_probe, ConjectureReport, ConjectureRow, EXPERIMENTAL_BANNER};
pub use context::{build_pinched_test, build_plain_test, error_probabilities, ErrorProbabilities, FiniteNContext, TestKind, TestOperator};
pub use stein::{stein_trace, stein_trace_csv, SteinPoint};
