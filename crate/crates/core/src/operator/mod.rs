//! Dense complex Hermitian linear algebra: clustered spectral calculus,
//! pinching, positive-part projections, tensor powers, and operator
//! inequality residuals.

pub mod inequality;
pub mod io;
pub mod jacobi;
pub mod matrix;
pub mod spectral;
pub mod tensor;
pub mod tolerance;

pub use inequality::{
    key_inequality_residual, monotonicity_residual, operator_convexity_gap, operator_convexity_residual,
};
pub use matrix::{ComplexMatrix, DensityOperator, HermitianOperator, C64};
pub use spectral::{
    eigendecompose, is_positive_semidefinite, matrix_log, matrix_power, min_eigenvalue, pinch, positive_projection,
    SpectralDecomposition,
};
pub use tensor::{tensor_power, tensor_power_decomposition, tensor_power_density};
pub use tolerance::{RankPolicy, ToleranceConfig};
