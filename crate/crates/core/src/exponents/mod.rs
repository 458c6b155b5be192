//! Exponent functions of a hypothesis pair and their transforms.

pub mod classical;
pub mod curve;
pub mod functions;
pub mod legendre;
pub mod optimize;
pub mod pair;

pub use classical::{classical_exponent, classical_hoeffding, classical_psi, ClassicalDistribution};
pub use curve::{sweep_curve, sweep_curve_with, CurveKind, CurveSample, ExponentCurve, Parameter};
pub use functions::{
    psi, psi_bar, psi_bar_trace, psi_derivatives, psi_trace, relative_entropy, symmetric_psi_bar, PsiDerivatives,
};
pub use legendre::{hoeffding_rate, phi, phi_bar, phi_with, solve_rate_parameter, PsiBarProfile, S_MIN};
pub use optimize::{Maximum, OptimizerConfig};
pub use pair::HypothesisPair;
