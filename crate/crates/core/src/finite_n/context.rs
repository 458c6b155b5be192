use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::HypothesisPair;
use crate::operator::jacobi::{eigh, Eigh};
use crate::operator::{
    key_inequality_residual, tensor_power_density, DensityOperator, HermitianOperator,
    SpectralDecomposition, C64,
};
use crate::operator::tensor::{kron_power, tensor_power_decomposition_ordered};

/// Multiple of `eps * norm` below which a dense eigenvalue is indistinguishable from zero.
const PLAIN_RESOLUTION: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestKind {
    Pinched,
    Plain,
}

/// A test `0 <= A <= I` on the n-fold space, with the parameters it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct TestOperator {
    pub operator: HermitianOperator,
    pub n: usize,
    pub a: f64,
    pub kind: TestKind,
}

impl TestOperator {
    /// `||A^2 - A||` in Frobenius norm.
    pub fn idempotency_defect(&self) -> f64 {
        let m = self.operator.matrix();
        (m * m - m).norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorProbabilities {
    pub alpha: f64,
    pub beta: f64,
    pub n: usize,
    pub a: f64,
}

const PROBABILITY_SLACK: f64 = 1e-12;

impl ErrorProbabilities {
    fn new(alpha: f64, beta: f64, n: usize, a: f64) -> Result<Self> {
        for (name, value) in [("alpha", alpha), ("beta", beta)] {
            if !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&value) {
                return Err(Error::ParameterOutOfRange { name, value, lo: 0.0, hi: 1.0 });
            }
        }
        Ok(Self { alpha, beta, n, a })
    }
}

/// `Tr[X Y]` for Hermitian `X, Y`, rejecting an imaginary residue above `1e-12`.
fn real_trace_product(x: &HermitianOperator, y: &HermitianOperator) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: y.dim() });
    }
    let (xm, ym) = (x.matrix(), y.matrix());
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..x.dim() {
        for i in 0..x.dim() {
            acc += xm[(i, j)] * ym[(j, i)];
        }
    }
    if acc.im.abs() > PROBABILITY_SLACK {
        return Err(Error::ComplexTrace { imag: acc.im });
    }
    Ok(acc.re)
}

/// Everything about the n-fold problem that does not depend on `a`.
///
/// `blocks[c]` diagonalizes `U_c* rho_n U_c`, where `U_c` spans the c-th
/// eigenvalue cluster of `sigma_n`; together the blocks are the pinched
/// state written in the eigenbasis of `sigma_n`. The blocks are cut from
/// `(V* rho V)^{(x)n}`, with `V` the eigenvectors of `sigma`, so small
/// entries keep their relative precision.
#[derive(Debug, Clone)]
pub struct FiniteNContext<'a> {
    pair: &'a HypothesisPair,
    n: usize,
    rho_n: DensityOperator,
    sigma_n: DensityOperator,
    sigma_n_spectrum: SpectralDecomposition,
    rho_blocks: Vec<DMatrix<C64>>,
    blocks: Vec<Eigh>,
}

impl<'a> FiniteNContext<'a> {
    pub fn new(pair: &'a HypothesisPair, n: usize) -> Result<Self> {
        let tol = pair.tol();
        let (sigma_n_spectrum, order) = tensor_power_decomposition_ordered(pair.sigma_spectrum(), n, tol)?;
        let rho_n = tensor_power_density(pair.rho(), n, tol)?;
        let sigma_n = tensor_power_density(pair.sigma(), n, tol)?;
        let v = pair.sigma_spectrum().eigenvectors();
        let rotated = kron_power(&(v.adjoint() * pair.rho().matrix() * v), n);
        let rho_blocks: Vec<DMatrix<C64>> = sigma_n_spectrum
            .cluster_ranges()
            .iter()
            .map(|r| {
                let idx = &order[r.clone()];
                let block = DMatrix::from_fn(r.len(), r.len(), |i, j| rotated[(idx[i], idx[j])]);
                (&block + block.adjoint()).scale(0.5)
            })
            .collect();
        let blocks = rho_blocks.iter().map(eigh).collect();
        Ok(Self { pair, n, rho_n, sigma_n, sigma_n_spectrum, rho_blocks, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rho_n(&self) -> &DensityOperator {
        &self.rho_n
    }

    pub fn sigma_n(&self) -> &DensityOperator {
        &self.sigma_n
    }

    pub fn sigma_n_spectrum(&self) -> &SpectralDecomposition {
        &self.sigma_n_spectrum
    }

    /// `v(sigma_n)`.
    pub fn v_sigma_n(&self) -> usize {
        self.sigma_n_spectrum.v()
    }

    /// `pinch(sigma_n, rho_n)` as a dense operator.
    pub fn rho_bar(&self) -> HermitianOperator {
        let u = self.sigma_n_spectrum.eigenvectors();
        let mut acc = DMatrix::<C64>::zeros(u.nrows(), u.nrows());
        for (r, block) in self.sigma_n_spectrum.cluster_ranges().iter().zip(&self.rho_blocks) {
            let uc = u.columns(r.start, r.len());
            acc += &uc * block * uc.adjoint();
        }
        HermitianOperator::from_matrix_unchecked(acc)
    }

    pub fn key_residual(&self) -> Result<f64> {
        key_inequality_residual(&self.rho_n, &self.sigma_n_spectrum, self.pair.tol())
    }

    /// `(w_rho, w_sigma)` with `w_rho X - w_sigma Y` a positive multiple of
    /// `X - e^{na} Y` that never overflows.
    fn weights(&self, a: f64) -> (f64, f64) {
        let t = self.n as f64 * a;
        if t > 0.0 {
            ((-t).exp(), 1.0)
        } else {
            (1.0, t.exp())
        }
    }

    /// Per block, the index of the first eigenvector of the pinched state
    /// with `mu_j > e^{na} lambda_c`. Eigenvalues ascend, so the kept
    /// eigenvectors are the tail. The comparison runs on logarithms, and
    /// `mu_j` within `cluster_rel_tol` of `e^{na} lambda_c` counts as equal
    /// and is excluded, as the inequality is strict.
    fn kept_from(&self, a: f64) -> Vec<usize> {
        let margin = (-self.pair.tol().cluster_rel_tol).ln_1p();
        let na = self.n as f64 * a;
        self.blocks
            .iter()
            .zip(self.sigma_n_spectrum.distinct_eigenvalues())
            .map(|(e, &lambda)| {
                let keep = |mu: f64| mu > 0.0 && (lambda <= 0.0 || mu.ln() + margin > na + lambda.ln());
                e.values.iter().position(|&mu| keep(mu)).unwrap_or(e.values.len())
            })
            .collect()
    }

    /// `{rho_bar_n - e^{na} sigma_n > 0}`.
    ///
    /// The pinched state is block diagonal in the eigenbasis of `sigma_n`,
    /// and `sigma_n` is a multiple of the identity on each block, so the
    /// positive part is found block by block and commutes with `sigma_n`.
    pub fn pinched_test(&self, a: f64) -> TestOperator {
        let first = self.kept_from(a);
        let dim = self.sigma_n_spectrum.dim();
        let kept: usize = self.blocks.iter().zip(&first).map(|(e, &f)| e.values.len() - f).sum();
        let operator = if kept == dim {
            HermitianOperator::identity(dim)
        } else if kept == 0 {
            HermitianOperator::zeros(dim)
        } else {
            let u = self.sigma_n_spectrum.eigenvectors();
            let mut acc = DMatrix::<C64>::zeros(dim, dim);
            for ((r, e), &f) in self.sigma_n_spectrum.cluster_ranges().iter().zip(&self.blocks).zip(&first) {
                if f == e.values.len() {
                    continue;
                }
                let w = u.columns(r.start, r.len()) * e.vectors.columns(f, e.values.len() - f);
                acc += &w * w.adjoint();
            }
            HermitianOperator::from_matrix_unchecked(acc)
        };
        TestOperator { operator, n: self.n, a, kind: TestKind::Pinched }
    }

    /// Errors of the pinched test, evaluated inside the eigenbasis of `sigma_n`.
    ///
    /// `beta` is `sum_c lambda_c * rank(A_c)`, exact up to relative rounding
    /// however small it is; a dense `Tr[sigma_n A]` has an absolute rounding
    /// floor near machine epsilon.
    pub fn pinched_errors(&self, a: f64) -> Result<ErrorProbabilities> {
        let first = self.kept_from(a);
        let lambdas = self.sigma_n_spectrum.distinct_eigenvalues();
        let (mut alpha, mut beta) = (0.0, 0.0);
        for (((e, block), &lambda), &f) in self.blocks.iter().zip(&self.rho_blocks).zip(lambdas).zip(&first) {
            beta += lambda * (e.values.len() - f) as f64;
            for j in 0..f {
                let w = e.vectors.column(j);
                alpha += (w.adjoint() * block * w)[(0, 0)].re;
            }
        }
        ErrorProbabilities::new(alpha, beta, self.n, a)
    }

    fn plain_difference(&self, a: f64) -> HermitianOperator {
        let (wr, ws) = self.weights(a);
        self.rho_n.scale(wr).sub(&self.sigma_n.scale(ws)).expect("same dimension")
    }

    fn smaller_weighted_norm(&self, a: f64) -> f64 {
        let (wr, ws) = self.weights(a);
        let top = |s: &SpectralDecomposition| s.distinct_eigenvalues().last().copied().unwrap_or(0.0);
        let n = self.n as i32;
        (wr * top(self.pair.rho_spectrum()).powi(n)).min(ws * top(self.pair.sigma_spectrum()).powi(n))
    }

    /// Whether the tie threshold of the plain test lies above the absolute
    /// rounding floor of a dense eigensolve. When it does not, eigenvalues
    /// of `rho_n - e^{na} sigma_n` near zero cannot be told apart from zero
    /// and the plain test is unreliable.
    pub fn plain_test_resolved(&self, a: f64) -> bool {
        let norm = self.plain_difference(a).spectral_norm();
        self.pair.tol().cluster_rel_tol * self.smaller_weighted_norm(a) > PLAIN_RESOLUTION * f64::EPSILON * norm
    }

    /// `{rho_n - e^{na} sigma_n > 0}`, without pinching.
    ///
    /// Eigenvalues at or below `cluster_rel_tol` times the smaller of the
    /// two weighted norms count as zero and are excluded. The threshold is
    /// floored at the absolute resolution of the dense eigensolve.
    pub fn plain_test(&self, a: f64) -> TestOperator {
        let x = self.plain_difference(a);
        let e = eigh(x.matrix());
        let norm = e.values.iter().fold(0.0_f64, |m, &v| m.max(v.abs()));
        let threshold = (self.pair.tol().cluster_rel_tol * self.smaller_weighted_norm(a))
            .max(PLAIN_RESOLUTION * f64::EPSILON * norm);
        let dim = x.dim();
        let first = e.values.iter().position(|&v| v > threshold).unwrap_or(dim);
        let operator = if first == 0 {
            HermitianOperator::identity(dim)
        } else if first == dim {
            HermitianOperator::zeros(dim)
        } else {
            let w = e.vectors.columns(first, dim - first);
            HermitianOperator::from_matrix_unchecked(&w * w.adjoint())
        };
        TestOperator { operator, n: self.n, a, kind: TestKind::Plain }
    }

    /// `alpha = Tr[rho_n (I - A)]`, `beta = Tr[sigma_n A]`.
    pub fn errors(&self, test: &TestOperator) -> Result<ErrorProbabilities> {
        let dim = self.rho_n.dim();
        if test.operator.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: test.operator.dim() });
        }
        let reject = HermitianOperator::identity(dim).sub(&test.operator)?;
        let alpha = real_trace_product(&self.rho_n, &reject)?;
        let beta = real_trace_product(&self.sigma_n, &test.operator)?;
        ErrorProbabilities::new(alpha, beta, test.n, test.a)
    }

    /// `Tr[rho_n A]`, the complement of `alpha`.
    pub fn acceptance_mass(&self, test: &TestOperator) -> Result<f64> {
        real_trace_product(&self.rho_n, &test.operator)
    }
}

pub fn build_pinched_test(pair: &HypothesisPair, n: usize, a: f64) -> Result<TestOperator> {
    Ok(FiniteNContext::new(pair, n)?.pinched_test(a))
}

pub fn build_plain_test(pair: &HypothesisPair, n: usize, a: f64) -> Result<TestOperator> {
    Ok(FiniteNContext::new(pair, n)?.plain_test(a))
}

pub fn error_probabilities(pair: &HypothesisPair, test: &TestOperator) -> Result<ErrorProbabilities> {
    FiniteNContext::new(pair, test.n)?.errors(test)
}
