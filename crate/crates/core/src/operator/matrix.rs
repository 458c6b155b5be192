use std::ops::Deref;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::jacobi;
use super::tolerance::ToleranceConfig;
use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Square dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn new(inner: DMatrix<C64>) -> Result<Self> {
        if inner.nrows() != inner.ncols() || inner.nrows() == 0 {
            return Err(Error::NotSquare { rows: inner.nrows(), cols: inner.ncols() });
        }
        Ok(Self(inner))
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let d = rows.len();
        for row in rows {
            if row.len() != d {
                return Err(Error::NotSquare { rows: d, cols: row.len() });
            }
        }
        Self::new(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
    }

    /// Builds a matrix from separate row-major real and imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let d = re.len();
        if im.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: im.len() });
        }
        for (r, i) in re.iter().zip(im) {
            if r.len() != d || i.len() != d {
                return Err(Error::NotSquare { rows: d, cols: r.len().max(i.len()) });
            }
        }
        Self::new(DMatrix::from_fn(d, d, |i, j| C64::new(re[i][j], im[i][j])))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// `max |M_ij - conj(M_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0_f64;
        for j in 0..d {
            for i in 0..=j {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn real_parts(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        (0..d).map(|i| (0..d).map(|j| self.0[(i, j)].re).collect()).collect()
    }

    pub fn imag_parts(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        (0..d).map(|i| (0..d).map(|j| self.0[(i, j)].im).collect()).collect()
    }
}

impl Deref for ComplexMatrix {
    type Target = DMatrix<C64>;

    fn deref(&self) -> &DMatrix<C64> {
        &self.0
    }
}

/// Complex matrix with Hermitian symmetry.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator(DMatrix<C64>);

impl HermitianOperator {
    /// Validates the Hermitian invariant and stores the exactly symmetrized matrix.
    pub fn new(matrix: ComplexMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let deviation = matrix.hermitian_deviation();
        let symmetric = Self::from_matrix_unchecked(matrix.into_inner());
        let allowed = tol.hermitian_tol * (1.0 + symmetric.spectral_norm());
        if !(deviation <= allowed) {
            return Err(Error::NonHermitianInput { deviation, allowed });
        }
        Ok(symmetric)
    }

    /// Symmetrizes `(M + M*) / 2` without checking how far `M` was from Hermitian.
    pub fn from_matrix_unchecked(m: DMatrix<C64>) -> Self {
        assert!(m.is_square(), "hermitian operator must be square");
        let sym = (&m + m.adjoint()).scale(0.5);
        Self(sym)
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let d = values.len();
        Self(DMatrix::from_fn(d, d, |i, j| if i == j { C64::new(values[i], 0.0) } else { C64::new(0.0, 0.0) }))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix(self.0.clone())
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self(self.0.map(|z| z * factor))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(Self(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(Self(&self.0 - &other.0))
    }

    /// `X* H X`, Hermitian for any square `X` of matching size.
    pub fn congruence(&self, x: &DMatrix<C64>) -> Result<Self> {
        self.check_dim(x.nrows())?;
        Ok(Self::from_matrix_unchecked(x.adjoint() * &self.0 * x))
    }

    /// `Tr[self * other]`, real for Hermitian factors.
    pub fn trace_product(&self, other: &Self) -> Result<f64> {
        self.check_dim(other.dim())?;
        let d = self.dim();
        let mut acc = 0.0;
        for j in 0..d {
            for i in 0..d {
                // Tr[AB] = sum_ij A_ij B_ji, and B_ji = conj(B_ij).
                acc += (self.0[(i, j)] * other.0[(i, j)].conj()).re;
            }
        }
        Ok(acc)
    }

    /// Largest absolute eigenvalue.
    pub fn spectral_norm(&self) -> f64 {
        jacobi::eigenvalues(&self.0).iter().fold(0.0_f64, |m, &x| m.max(x.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    /// Entrywise max-abs distance.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn commutator_norm(&self, other: &Self) -> f64 {
        let c = &self.0 * &other.0 - &other.0 * &self.0;
        c.norm()
    }

    pub(crate) fn check_dim(&self, found: usize) -> Result<()> {
        if self.dim() != found {
            return Err(Error::DimensionMismatch { expected: self.dim(), found });
        }
        Ok(())
    }
}

/// Positive semidefinite Hermitian operator of unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator(HermitianOperator);

impl DensityOperator {
    pub fn new(op: HermitianOperator, tol: &ToleranceConfig) -> Result<Self> {
        let trace = op.trace();
        if !((trace - 1.0).abs() <= tol.trace_tol) {
            return Err(Error::TraceNotUnit { trace, allowed: tol.trace_tol });
        }
        let min_eigenvalue = jacobi::eigenvalues(op.matrix()).first().copied().unwrap_or(0.0);
        if min_eigenvalue < -tol.psd_tol {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue, allowed: tol.psd_tol });
        }
        Ok(Self(op))
    }

    pub fn from_complex(m: ComplexMatrix, tol: &ToleranceConfig) -> Result<Self> {
        Self::new(HermitianOperator::new(m, tol)?, tol)
    }

    pub fn diagonal(probabilities: &[f64], tol: &ToleranceConfig) -> Result<Self> {
        Self::new(HermitianOperator::diagonal(probabilities), tol)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(HermitianOperator::identity(dim).scale(1.0 / dim as f64))
    }

    /// `(1 - delta) * self + delta * I / d`.
    pub fn smoothed(&self, delta: f64) -> Self {
        let d = self.dim();
        let mixed = HermitianOperator::identity(d).scale(delta / d as f64);
        Self(self.0.scale(1.0 - delta).add(&mixed).expect("same dimension"))
    }

    /// Rescaled to exactly unit trace (up to rounding).
    pub fn normalized(&self) -> Self {
        Self(self.0.scale(1.0 / self.0.trace()))
    }

    pub(crate) fn from_operator_unchecked(op: HermitianOperator) -> Self {
        Self(op)
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.0
    }

    pub fn into_operator(self) -> HermitianOperator {
        self.0
    }
}

impl Deref for DensityOperator {
    type Target = HermitianOperator;

    fn deref(&self) -> &HermitianOperator {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn rejects_non_square_rows() {
        let rows = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0)]];
        assert!(matches!(ComplexMatrix::from_rows(&rows), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn hermitian_check() {
        let tol = ToleranceConfig::default();
        let ok = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.2, 0.3)], vec![c(0.2, -0.3), c(0.5, 0.0)]]).unwrap();
        HermitianOperator::new(ok, &tol).unwrap();
        let bad = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.2, 0.3)], vec![c(0.2, 0.3), c(0.5, 0.0)]]).unwrap();
        assert!(matches!(HermitianOperator::new(bad, &tol), Err(Error::NonHermitianInput { .. })));
    }

    #[test]
    fn density_checks_trace_and_positivity() {
        let tol = ToleranceConfig::default();
        assert!(matches!(DensityOperator::diagonal(&[0.5, 0.49], &tol), Err(Error::TraceNotUnit { .. })));
        assert!(matches!(
            DensityOperator::diagonal(&[1.5, -0.5], &tol),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
        let rho = DensityOperator::diagonal(&[0.9, 0.1], &tol).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn smoothing_keeps_unit_trace() {
        let tol = ToleranceConfig::default();
        let pure = DensityOperator::diagonal(&[1.0, 0.0], &tol).unwrap();
        let smooth = pure.smoothed(0.1);
        assert!((smooth.trace() - 1.0).abs() < 1e-15);
        assert!((smooth.matrix()[(1, 1)].re - 0.05).abs() < 1e-15);
    }

    #[test]
    fn trace_product_matches_dense() {
        let a = HermitianOperator::from_matrix_unchecked(DMatrix::from_fn(3, 3, |i, j| c((i + 2 * j) as f64, i as f64 - j as f64)));
        let b = HermitianOperator::from_matrix_unchecked(DMatrix::from_fn(3, 3, |i, j| c((i * j) as f64 + 1.0, (j as f64) * 0.5 - i as f64)));
        let dense = (a.matrix() * b.matrix()).trace();
        assert!((a.trace_product(&b).unwrap() - dense.re).abs() < 1e-12);
        assert!(dense.im.abs() < 1e-12);
    }
}
