use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::operator::io::{MatrixJson, PairJson};
use crate::operator::{
    eigendecompose, DensityOperator, HermitianOperator, RankPolicy, SpectralDecomposition, ToleranceConfig, C64,
};

/// A validated testing problem: null hypothesis `rho`, alternative `sigma`.
///
/// Spectral decompositions of both states are computed once at construction
/// and reused by every exponent evaluation.
#[derive(Debug, Clone)]
pub struct HypothesisPair {
    rho: DensityOperator,
    sigma: DensityOperator,
    rho_spectrum: SpectralDecomposition,
    sigma_spectrum: SpectralDecomposition,
    tol: ToleranceConfig,
}

impl HypothesisPair {
    pub fn new(rho: DensityOperator, sigma: DensityOperator, tol: ToleranceConfig) -> Result<Self> {
        tol.validate()?;
        if rho.dim() != sigma.dim() {
            return Err(Error::DimensionMismatch { expected: rho.dim(), found: sigma.dim() });
        }
        let (rho, sigma) = match tol.rank_policy {
            RankPolicy::Strict => (rho, sigma),
            RankPolicy::Smoothing { delta } => (rho.smoothed(delta), sigma.smoothed(delta)),
        };
        let (rho, sigma) = (rho.normalized(), sigma.normalized());
        let rho_spectrum = eigendecompose(rho.operator(), &tol);
        let sigma_spectrum = eigendecompose(sigma.operator(), &tol);
        for spectrum in [&rho_spectrum, &sigma_spectrum] {
            if !spectrum.is_full_rank(&tol) {
                return Err(Error::SingularInput { eigenvalue: spectrum.min_eigenvalue() });
            }
        }
        Ok(Self { rho, sigma, rho_spectrum, sigma_spectrum, tol })
    }

    /// Pair of diagonal states with the given probability vectors.
    pub fn diagonal(p: &[f64], q: &[f64], tol: ToleranceConfig) -> Result<Self> {
        Self::new(DensityOperator::diagonal(p, &tol)?, DensityOperator::diagonal(q, &tol)?, tol)
    }

    /// Validates both states of a parsed pair file.
    pub fn from_json(json: &PairJson, tol: ToleranceConfig) -> Result<Self> {
        Self::new(json.rho.to_density(&tol)?, json.sigma.to_density(&tol)?, tol)
    }

    /// The states as used in computations, after any smoothing.
    pub fn to_json(&self) -> PairJson {
        PairJson {
            rho: MatrixJson::from_matrix(&self.rho.to_complex()),
            sigma: MatrixJson::from_matrix(&self.sigma.to_complex()),
        }
    }

    pub fn rho(&self) -> &DensityOperator {
        &self.rho
    }

    pub fn sigma(&self) -> &DensityOperator {
        &self.sigma
    }

    pub fn rho_spectrum(&self) -> &SpectralDecomposition {
        &self.rho_spectrum
    }

    pub fn sigma_spectrum(&self) -> &SpectralDecomposition {
        &self.sigma_spectrum
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn tol(&self) -> &ToleranceConfig {
        &self.tol
    }

    /// The pair with hypotheses exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            rho: self.sigma.clone(),
            sigma: self.rho.clone(),
            rho_spectrum: self.sigma_spectrum.clone(),
            sigma_spectrum: self.rho_spectrum.clone(),
            tol: self.tol,
        }
    }

    /// `(U rho U*, U sigma U*)` for a unitary `U`.
    pub fn conjugated(&self, unitary: &DMatrix<C64>) -> Result<Self> {
        let adj = unitary.adjoint();
        let rho = HermitianOperator::from_matrix_unchecked(unitary * self.rho.matrix() * &adj);
        let sigma = HermitianOperator::from_matrix_unchecked(unitary * self.sigma.matrix() * &adj);
        let strict = ToleranceConfig { rank_policy: RankPolicy::Strict, ..self.tol };
        let mut pair = Self::new(DensityOperator::new(rho, &strict)?, DensityOperator::new(sigma, &strict)?, strict)?;
        pair.tol = self.tol;
        Ok(pair)
    }

    /// Whether `rho` and `sigma` commute up to `proj_tol`.
    pub fn commutes(&self) -> bool {
        self.rho.commutator_norm(&self.sigma) <= self.tol.proj_tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_mismatched_and_singular() {
        let tol = ToleranceConfig::default();
        let rho = DensityOperator::diagonal(&[0.5, 0.5], &tol).unwrap();
        let sigma = DensityOperator::diagonal(&[0.2, 0.3, 0.5], &tol).unwrap();
        assert!(matches!(HypothesisPair::new(rho.clone(), sigma, tol), Err(Error::DimensionMismatch { .. })));
        let pure = DensityOperator::diagonal(&[1.0, 0.0], &tol).unwrap();
        assert!(matches!(HypothesisPair::new(rho, pure.clone(), tol), Err(Error::SingularInput { .. })));
        let smooth = tol.with_smoothing(1e-3);
        let pair = HypothesisPair::new(pure.clone(), pure, smooth).unwrap();
        assert!((pair.rho().matrix()[(1, 1)].re - 5e-4).abs() < 1e-15);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let pair = HypothesisPair::diagonal(&[0.3, 0.7], &[0.65, 0.35], ToleranceConfig::default()).unwrap();
        let text = serde_json::to_string(&pair.to_json()).unwrap();
        let back = HypothesisPair::from_json(&crate::operator::io::parse_pair(&text).unwrap(), *pair.tol()).unwrap();
        assert_eq!(back.rho(), pair.rho());
        assert_eq!(back.sigma(), pair.sigma());
    }

    #[test]
    fn swapped_exchanges_roles() {
        let pair = HypothesisPair::diagonal(&[0.5, 0.5], &[0.9, 0.1], ToleranceConfig::default()).unwrap();
        let s = pair.swapped();
        assert_eq!(s.rho(), pair.sigma());
        assert_eq!(s.sigma_spectrum().distinct_eigenvalues(), pair.rho_spectrum().distinct_eigenvalues());
        assert!(pair.commutes());
    }
}
