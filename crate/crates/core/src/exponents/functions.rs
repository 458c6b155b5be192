use nalgebra::DMatrix;

use super::pair::HypothesisPair;
use crate::error::{Error, Result};
use crate::operator::{HermitianOperator, C64};

/// Imaginary residue allowed in traces that are real in exact arithmetic.
const IMAG_TOL: f64 = 1e-10;

fn check_unit_interval(name: &'static str, s: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::ParameterOutOfRange { name, value: s, lo: 0.0, hi: 1.0 });
    }
    Ok(())
}

fn real_trace(z: C64) -> Result<f64> {
    if z.im.abs() > IMAG_TOL * z.re.abs().max(1.0) {
        return Err(Error::ComplexTrace { imag: z.im });
    }
    Ok(z.re)
}

fn trace_of(m: DMatrix<C64>) -> Result<f64> {
    real_trace(m.trace())
}

/// `D(rho||sigma) = Tr[rho (log rho - log sigma)]`.
pub fn relative_entropy(pair: &HypothesisPair) -> Result<f64> {
    let tol = pair.tol();
    let diff = pair.rho_spectrum().log(tol)?.sub(&pair.sigma_spectrum().log(tol)?)?;
    pair.rho().trace_product(&diff)
}

/// `Tr[rho sigma^{s/2} rho^{-s} sigma^{s/2}]`.
pub fn psi_bar_trace(pair: &HypothesisPair, s: f64) -> Result<f64> {
    check_unit_interval("s", s)?;
    let tol = pair.tol();
    let half = pair.sigma_spectrum().power(s / 2.0, tol)?;
    let inv = pair.rho_spectrum().power(-s, tol)?;
    let sandwich = half.matrix() * inv.matrix() * half.matrix();
    trace_of(pair.rho().matrix() * sandwich)
}

/// `-log Tr[rho sigma^{s/2} rho^{-s} sigma^{s/2}]`.
pub fn psi_bar(pair: &HypothesisPair, s: f64) -> Result<f64> {
    Ok(-psi_bar_trace(pair, s)?.ln())
}

/// `Tr[rho^{1-s} sigma^s]`.
pub fn psi_trace(pair: &HypothesisPair, s: f64) -> Result<f64> {
    check_unit_interval("s", s)?;
    let tol = pair.tol();
    let a = pair.rho_spectrum().power(1.0 - s, tol)?;
    let b = pair.sigma_spectrum().power(s, tol)?;
    a.trace_product(&b)
}

/// `-log Tr[rho^{1-s} sigma^s]`.
pub fn psi(pair: &HypothesisPair, s: f64) -> Result<f64> {
    Ok(-psi_trace(pair, s)?.ln())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiDerivatives {
    pub value: f64,
    pub first: f64,
    pub second: f64,
}

/// `psi(s)`, `psi'(s)`, and `psi''(s)` from the closed-form trace expressions.
///
/// `psi'(s) = e^{psi} Tr[rho^{1-s} sigma^s (log rho - log sigma)]` and
/// `psi''(s) = -e^{psi} Tr[rho^{1-s} A sigma^s A]` with
/// `A = log rho - log sigma - psi'(s)`.
pub fn psi_derivatives(pair: &HypothesisPair, s: f64) -> Result<PsiDerivatives> {
    check_unit_interval("s", s)?;
    let tol = pair.tol();
    let rho_pow = pair.rho_spectrum().power(1.0 - s, tol)?;
    let sigma_pow = pair.sigma_spectrum().power(s, tol)?;
    let log_ratio = pair.rho_spectrum().log(tol)?.sub(&pair.sigma_spectrum().log(tol)?)?;
    let trace = rho_pow.trace_product(&sigma_pow)?;
    let first = trace_of(rho_pow.matrix() * sigma_pow.matrix() * log_ratio.matrix())? / trace;
    let centered = log_ratio.sub(&HermitianOperator::identity(pair.dim()).scale(first))?;
    let curvature = trace_of(rho_pow.matrix() * centered.matrix() * sigma_pow.matrix() * centered.matrix())?;
    Ok(PsiDerivatives { value: -trace.ln(), first, second: -curvature / trace })
}

/// `max{psi_bar(rho, sigma; s), psi_bar(sigma, rho; s)}`.
pub fn symmetric_psi_bar(pair: &HypothesisPair, s: f64) -> Result<f64> {
    Ok(psi_bar(pair, s)?.max(psi_bar(&pair.swapped(), s)?))
}
