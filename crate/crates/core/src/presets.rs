//! Named hypothesis pairs.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::exponents::HypothesisPair;
use crate::operator::{ComplexMatrix, DensityOperator, HermitianOperator, ToleranceConfig, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `rho = sigma = [[0.7, 0.2 + 0.1i], [0.2 - 0.1i, 0.3]]`.
    Identical,
    /// `diag(0.5, 0.5)` against `diag(0.9, 0.1)`.
    Commuting1,
    /// `rho = diag(1 - e, e)` against `sigma = V diag(e, 1 - e) V*`, with
    /// `e = 1e-7` and `V = [[c, -conj(w) s], [w s, c]]`, `c = cos(t/2)`,
    /// `s = sin(t/2)`, `t = 5e-4`, `w = exp(0.7i)`.
    ///
    /// The two states are nearly orthogonal and do not commute. They are
    /// far enough apart that the `alpha` envelope of the pinched test
    /// at `a = 0.9 D` shrinks visibly by `n = 8`.
    QubitGeneric,
}

pub const QUBIT_GENERIC_EPSILON: f64 = 1e-7;
pub const QUBIT_GENERIC_ANGLE: f64 = 5e-4;
pub const QUBIT_GENERIC_PHASE: f64 = 0.7;

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Identical, Preset::Commuting1, Preset::QubitGeneric];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Identical => "identical",
            Preset::Commuting1 => "commuting-1",
            Preset::QubitGeneric => "qubit-generic",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name).ok_or_else(|| {
            let known: Vec<&str> = Self::ALL.iter().map(|p| p.name()).collect();
            Error::Parse(format!("unknown preset {name:?}; known presets: {}", known.join(", ")))
        })
    }

    pub fn pair(self, tol: ToleranceConfig) -> Result<HypothesisPair> {
        match self {
            Preset::Identical => {
                let c = |re, im| C64::new(re, im);
                let m = ComplexMatrix::from_rows(&[vec![c(0.7, 0.0), c(0.2, 0.1)], vec![c(0.2, -0.1), c(0.3, 0.0)]])?;
                let rho = DensityOperator::from_complex(m, &tol)?;
                HypothesisPair::new(rho.clone(), rho, tol)
            }
            Preset::Commuting1 => HypothesisPair::diagonal(&[0.5, 0.5], &[0.9, 0.1], tol),
            Preset::QubitGeneric => {
                let e = QUBIT_GENERIC_EPSILON;
                let (c, s) = ((QUBIT_GENERIC_ANGLE / 2.0).cos(), (QUBIT_GENERIC_ANGLE / 2.0).sin());
                let w = C64::from_polar(1.0, QUBIT_GENERIC_PHASE);
                let v = DMatrix::from_row_slice(2, 2, &[C64::new(c, 0.0), -w.conj() * s, w * s, C64::new(c, 0.0)]);
                let sigma = &v * HermitianOperator::diagonal(&[e, 1.0 - e]).matrix() * v.adjoint();
                let rho = DensityOperator::diagonal(&[1.0 - e, e], &tol)?;
                let sigma = DensityOperator::new(HermitianOperator::from_matrix_unchecked(sigma), &tol)?;
                HypothesisPair::new(rho, sigma, tol)
            }
        }
    }
}
