//! JSON exchange format for matrices: `{"dim": d, "re": [[..]], "im": [[..]]}`,
//! row-major.

use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, DensityOperator, HermitianOperator};
use super::tolerance::ToleranceConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self { dim: m.dim(), re: m.real_parts(), im: m.imag_parts() }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.re.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: self.re.len() });
        }
        ComplexMatrix::from_parts(&self.re, &self.im)
    }

    pub fn to_hermitian(&self, tol: &ToleranceConfig) -> Result<HermitianOperator> {
        HermitianOperator::new(self.to_matrix()?, tol)
    }

    pub fn to_density(&self, tol: &ToleranceConfig) -> Result<DensityOperator> {
        DensityOperator::new(self.to_hermitian(tol)?, tol)
    }
}

/// A pair of states on disk: `{"rho": <matrix>, "sigma": <matrix>}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairJson {
    pub rho: MatrixJson,
    pub sigma: MatrixJson,
}

pub fn parse_matrix(text: &str) -> Result<MatrixJson> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_pair(text: &str) -> Result<PairJson> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_validates() {
        let tol = ToleranceConfig::default();
        let text = r#"{"dim": 2, "re": [[0.7, 0.2], [0.2, 0.3]], "im": [[0, 0.1], [-0.1, 0]]}"#;
        let m = parse_matrix(text).unwrap();
        let rho = m.to_density(&tol).unwrap();
        assert_eq!(rho.dim(), 2);
        let back = MatrixJson::from_matrix(&rho.to_complex());
        assert_eq!(back, m);
    }

    #[test]
    fn reports_bad_shapes() {
        let text = r#"{"dim": 3, "re": [[1, 0], [0, 1]], "im": [[0, 0], [0, 0]]}"#;
        assert!(matches!(parse_matrix(text).unwrap().to_matrix(), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(parse_matrix("{\"dim\": 2}"), Err(Error::Parse(_))));
    }

    #[test]
    fn rejects_non_hermitian() {
        let tol = ToleranceConfig::default();
        let text = r#"{"dim": 2, "re": [[0.5, 0.3], [0.1, 0.5]], "im": [[0, 0], [0, 0]]}"#;
        let err = parse_matrix(text).unwrap().to_density(&tol).unwrap_err();
        assert_eq!(err.invariant(), "hermitian");
    }
}
