//! Signed residuals for operator inequalities.
//!
//! Each check returns the minimum eigenvalue of `RHS - LHS`; the inequality
//! holds when the residual is nonnegative up to a caller-chosen tolerance.

use nalgebra::DMatrix;

use super::matrix::{ComplexMatrix, DensityOperator, HermitianOperator, C64};
use super::spectral::{min_eigenvalue, SpectralDecomposition};
use super::tolerance::ToleranceConfig;
use crate::error::{Error, Result};

/// `min eig(v(sigma_n) * pinch(sigma_n, rho_n) - rho_n)`.
pub fn key_inequality_residual(
    rho_n: &DensityOperator,
    sigma_n: &SpectralDecomposition,
    tol: &ToleranceConfig,
) -> Result<f64> {
    let pinched = sigma_n.pinch(rho_n.operator())?;
    let gap = pinched.scale(sigma_n.v() as f64).sub(rho_n.operator())?;
    Ok(min_eigenvalue(&gap, tol))
}

/// `min eig(v^s rho_n^{-s} - pinch(sigma_n, rho_n)^{-s})`, divided by the
/// spectral norm of `v^s rho_n^{-s}` so the result is scale-free.
pub fn monotonicity_residual(
    rho_n: &DensityOperator,
    sigma_n: &SpectralDecomposition,
    s: f64,
    tol: &ToleranceConfig,
) -> Result<f64> {
    let pinched = sigma_n.pinch(rho_n.operator())?;
    let rho_pow = super::spectral::matrix_power(rho_n.operator(), -s, tol)?;
    let pinched_pow = super::spectral::matrix_power(&pinched, -s, tol)?;
    let lhs = rho_pow.scale((sigma_n.v() as f64).powf(s));
    let scale = lhs.spectral_norm().max(1.0);
    Ok(min_eigenvalue(&lhs.sub(&pinched_pow)?, tol) / scale)
}

fn check_square(expected: usize, m: &ComplexMatrix) -> Result<()> {
    if m.dim() != expected {
        return Err(Error::DimensionMismatch { expected, found: m.dim() });
    }
    Ok(())
}

/// `t X*AX + (1-t) Y*AY - (tX + (1-t)Y)* A (tX + (1-t)Y)` for `A >= 0`.
pub fn operator_convexity_gap(
    a: &HermitianOperator,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    t: f64,
    tol: &ToleranceConfig,
) -> Result<HermitianOperator> {
    check_square(a.dim(), x)?;
    check_square(a.dim(), y)?;
    let min = min_eigenvalue(a, tol);
    if min < -tol.psd_tol * a.spectral_norm().max(1.0) {
        return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min, allowed: tol.psd_tol });
    }
    let mix: DMatrix<C64> = x.as_matrix().scale(t) + y.as_matrix().scale(1.0 - t);
    let fx = a.congruence(x.as_matrix())?;
    let fy = a.congruence(y.as_matrix())?;
    let fmix = a.congruence(&mix)?;
    fx.scale(t).add(&fy.scale(1.0 - t))?.sub(&fmix)
}

/// Minimum eigenvalue of [`operator_convexity_gap`].
pub fn operator_convexity_residual(
    a: &HermitianOperator,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    t: f64,
    tol: &ToleranceConfig,
) -> Result<f64> {
    Ok(min_eigenvalue(&operator_convexity_gap(a, x, y, t, tol)?, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::spectral::eigendecompose;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn key_residual_commuting_case() {
        let t = tol();
        let rho = DensityOperator::diagonal(&[0.2, 0.3, 0.5], &t).unwrap();
        let sigma = eigendecompose(&HermitianOperator::diagonal(&[0.1, 0.6, 0.3]), &t);
        let r = key_inequality_residual(&rho, &sigma, &t).unwrap();
        // pinch(rho) = rho, so the gap is (v - 1) rho.
        assert!((r - 2.0 * 0.2).abs() < 1e-14);
    }

    #[test]
    fn key_residual_single_block() {
        let t = tol();
        let rho = DensityOperator::diagonal(&[0.7, 0.3], &t).unwrap();
        let sigma = eigendecompose(&HermitianOperator::identity(2).scale(0.5), &t);
        assert!(key_inequality_residual(&rho, &sigma, &t).unwrap().abs() < 1e-15);
    }

    #[test]
    fn convexity_endpoints_and_equal_arguments() {
        let t = tol();
        let a = HermitianOperator::diagonal(&[1.0, 2.0]);
        let x = ComplexMatrix::new(DMatrix::from_fn(2, 2, |i, j| C64::new(i as f64 + 1.0, j as f64))).unwrap();
        let y = ComplexMatrix::new(DMatrix::from_fn(2, 2, |i, j| C64::new(j as f64 - 1.0, i as f64 * 0.5))).unwrap();
        for tt in [0.0, 1.0] {
            assert!(operator_convexity_residual(&a, &x, &y, tt, &t).unwrap().abs() < 1e-12);
        }
        assert!(operator_convexity_residual(&a, &x, &x, 0.4, &t).unwrap().abs() < 1e-12);
        let bad = HermitianOperator::diagonal(&[1.0, -1.0]);
        assert!(matches!(
            operator_convexity_residual(&bad, &x, &y, 0.5, &t),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }
}
