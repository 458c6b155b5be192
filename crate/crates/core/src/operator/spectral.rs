use std::ops::Range;

use nalgebra::DMatrix;

use super::jacobi;
use super::matrix::{HermitianOperator, C64};
use super::tolerance::{RankPolicy, ToleranceConfig};
use crate::error::{Error, Result};

/// Eigendecomposition with numerically coincident eigenvalues merged into
/// clusters. Cluster `i` has eigenvalue `distinct_eigenvalues()[i]` and
/// projection `projection(i)`; the number of clusters is `v()`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    values: Vec<f64>,
    vectors: DMatrix<C64>,
    clusters: Vec<Range<usize>>,
    distinct: Vec<f64>,
    cluster_tol: f64,
}

/// Groups ascending `values` into runs whose consecutive gaps are at most `gap`.
fn cluster_ranges(values: &[f64], gap: f64) -> Vec<Range<usize>> {
    let mut clusters = Vec::new();
    let mut start = 0;
    for k in 1..values.len() {
        if values[k] - values[k - 1] > gap {
            clusters.push(start..k);
            start = k;
        }
    }
    if !values.is_empty() {
        clusters.push(start..values.len());
    }
    clusters
}

fn spectral_cluster_gap(values: &[f64], tol: &ToleranceConfig) -> f64 {
    let norm = values.iter().fold(0.0_f64, |m, &x| m.max(x.abs()));
    tol.cluster_rel_tol * norm
}

impl SpectralDecomposition {
    /// Ascending eigenvalues must be paired with orthonormal eigenvector columns.
    pub(crate) fn from_eigenpairs(values: Vec<f64>, vectors: DMatrix<C64>, tol: &ToleranceConfig) -> Self {
        debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        let cluster_tol = spectral_cluster_gap(&values, tol);
        let clusters = cluster_ranges(&values, cluster_tol);
        let distinct = clusters
            .iter()
            .map(|r| values[r.clone()].iter().sum::<f64>() / r.len() as f64)
            .collect();
        Self { values, vectors, clusters, distinct, cluster_tol }
    }

    /// Decomposition with clusters supplied by the caller. `clusters` must
    /// partition `0..values.len()` into consecutive ranges.
    pub(crate) fn from_clusters(
        values: Vec<f64>,
        vectors: DMatrix<C64>,
        clusters: Vec<Range<usize>>,
        distinct: Vec<f64>,
        tol: &ToleranceConfig,
    ) -> Self {
        debug_assert_eq!(clusters.len(), distinct.len());
        let cluster_tol = spectral_cluster_gap(&values, tol);
        Self { values, vectors, clusters, distinct, cluster_tol }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Number of distinct eigenvalues.
    pub fn v(&self) -> usize {
        self.clusters.len()
    }

    pub fn distinct_eigenvalues(&self) -> &[f64] {
        &self.distinct
    }

    /// Unclustered eigenvalues, ascending.
    pub fn raw_eigenvalues(&self) -> &[f64] {
        &self.values
    }

    pub fn eigenvectors(&self) -> &DMatrix<C64> {
        &self.vectors
    }

    /// Absolute gap below which eigenvalues were merged.
    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.clusters.iter().map(|r| r.len()).collect()
    }

    pub fn spectral_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, &x| m.max(x.abs()))
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.distinct.last().expect("nonempty spectrum")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.distinct[0]
    }

    pub fn projection(&self, cluster: usize) -> HermitianOperator {
        let cols = self.vectors.columns(self.clusters[cluster].start, self.clusters[cluster].len());
        HermitianOperator::from_matrix_unchecked(&cols * cols.adjoint())
    }

    pub fn projections(&self) -> Vec<HermitianOperator> {
        (0..self.v()).map(|i| self.projection(i)).collect()
    }

    /// `sum_i f(a_i) E_i`; `f` is evaluated once per cluster.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let weights: Vec<f64> = self.distinct.iter().map(|&x| f(x)).collect();
        self.apply_weights(&weights)
    }

    fn apply_weights(&self, cluster_weights: &[f64]) -> HermitianOperator {
        let mut scaled = self.vectors.clone();
        for (range, &w) in self.clusters.iter().zip(cluster_weights) {
            for j in range.clone() {
                scaled.column_mut(j).scale_mut(w);
            }
        }
        HermitianOperator::from_matrix_unchecked(scaled * self.vectors.adjoint())
    }

    pub fn reconstruct(&self) -> HermitianOperator {
        self.apply(|x| x)
    }

    /// `sum_i E_i B E_i` over this decomposition's eigenprojections.
    pub fn pinch(&self, b: &HermitianOperator) -> Result<HermitianOperator> {
        if b.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: b.dim() });
        }
        let mut rotated = self.vectors.adjoint() * b.matrix() * &self.vectors;
        let label = self.cluster_labels();
        let n = self.dim();
        for j in 0..n {
            for i in 0..n {
                if label[i] != label[j] {
                    rotated[(i, j)] = C64::new(0.0, 0.0);
                }
            }
        }
        Ok(HermitianOperator::from_matrix_unchecked(&self.vectors * rotated * self.vectors.adjoint()))
    }

    pub(crate) fn cluster_labels(&self) -> Vec<usize> {
        let mut label = vec![0; self.dim()];
        for (c, r) in self.clusters.iter().enumerate() {
            for k in r.clone() {
                label[k] = c;
            }
        }
        label
    }

    pub(crate) fn cluster_ranges(&self) -> &[Range<usize>] {
        &self.clusters
    }

    /// Sum of projections onto clusters with eigenvalue above `threshold`.
    pub fn projection_above(&self, threshold: f64) -> HermitianOperator {
        let weights: Vec<f64> = self.distinct.iter().map(|&x| if x > threshold { 1.0 } else { 0.0 }).collect();
        if weights.iter().all(|&w| w == 1.0) {
            return HermitianOperator::identity(self.dim());
        }
        if weights.iter().all(|&w| w == 0.0) {
            return HermitianOperator::zeros(self.dim());
        }
        self.apply_weights(&weights)
    }

    fn support_threshold(&self, tol: &ToleranceConfig) -> f64 {
        tol.support_cutoff * self.max_eigenvalue().max(0.0)
    }

    /// Functional calculus `sum_i a_i^t E_i`.
    ///
    /// `t = 0` gives the support projection. Negative powers are taken on
    /// the support only; in strict mode a cutoff eigenvalue is an error.
    pub fn power(&self, t: f64, tol: &ToleranceConfig) -> Result<HermitianOperator> {
        let cutoff = tol.support_cutoff * self.spectral_norm();
        let integer = t.fract() == 0.0;
        if !integer {
            let min = self.min_eigenvalue();
            if min < -tol.psd_tol {
                return Err(Error::NegativeSpectrum { exponent: t, min_eigenvalue: min });
            }
        }
        if t == 0.0 && self.distinct.iter().all(|x| x.abs() > cutoff) {
            return Ok(HermitianOperator::identity(self.dim()));
        }
        let mut weights = Vec::with_capacity(self.v());
        for &x in &self.distinct {
            let w = if t == 0.0 {
                if x.abs() > cutoff { 1.0 } else { 0.0 }
            } else if t < 0.0 {
                let singular = if integer { x.abs() <= cutoff } else { x <= cutoff };
                if singular {
                    if matches!(tol.rank_policy, RankPolicy::Strict) {
                        return Err(Error::SingularInStrictMode { exponent: t, eigenvalue: x });
                    }
                    0.0
                } else if integer {
                    x.powi(t as i32)
                } else {
                    x.powf(t)
                }
            } else if integer {
                x.powi(t as i32)
            } else {
                x.max(0.0).powf(t)
            };
            weights.push(w);
        }
        Ok(self.apply_weights(&weights))
    }

    /// `sum_i log(a_i) E_i`; every eigenvalue must clear the support cutoff.
    pub fn log(&self, tol: &ToleranceConfig) -> Result<HermitianOperator> {
        let cutoff = self.support_threshold(tol);
        let min = self.min_eigenvalue();
        if min <= cutoff || min <= 0.0 {
            return Err(Error::SingularInput { eigenvalue: min });
        }
        Ok(self.apply(f64::ln))
    }

    /// Whether every eigenvalue clears the support cutoff.
    pub fn is_full_rank(&self, tol: &ToleranceConfig) -> bool {
        let min = self.min_eigenvalue();
        min > 0.0 && min > self.support_threshold(tol)
    }
}

pub fn eigendecompose(h: &HermitianOperator, tol: &ToleranceConfig) -> SpectralDecomposition {
    let e = jacobi::eigh(h.matrix());
    SpectralDecomposition::from_eigenpairs(e.values, e.vectors, tol)
}

pub fn pinch(reference: &SpectralDecomposition, b: &HermitianOperator) -> Result<HermitianOperator> {
    reference.pinch(b)
}

/// `{X > 0}`: projection onto clusters with strictly positive eigenvalue.
/// Clusters within `cluster_rel_tol * norm` of zero are treated as zero.
pub fn positive_projection(x: &HermitianOperator, tol: &ToleranceConfig) -> HermitianOperator {
    let decomp = eigendecompose(x, tol);
    let threshold = tol.cluster_rel_tol * decomp.spectral_norm();
    decomp.projection_above(threshold)
}

pub fn matrix_power(h: &HermitianOperator, t: f64, tol: &ToleranceConfig) -> Result<HermitianOperator> {
    if t == 1.0 {
        return Ok(h.clone());
    }
    eigendecompose(h, tol).power(t, tol)
}

pub fn matrix_log(h: &HermitianOperator, tol: &ToleranceConfig) -> Result<HermitianOperator> {
    eigendecompose(h, tol).log(tol)
}

/// Smallest clustered eigenvalue.
pub fn min_eigenvalue(x: &HermitianOperator, tol: &ToleranceConfig) -> f64 {
    let values = jacobi::eigenvalues(x.matrix());
    let gap = spectral_cluster_gap(&values, tol);
    let first = &cluster_ranges(&values, gap)[0];
    values[first.clone()].iter().sum::<f64>() / first.len() as f64
}

/// `X >= 0` up to `psd_tol * spectral_norm`.
pub fn is_positive_semidefinite(x: &HermitianOperator, tol: &ToleranceConfig) -> bool {
    let values = jacobi::eigenvalues(x.matrix());
    let norm = values.iter().fold(0.0_f64, |m, &v| m.max(v.abs()));
    values[0] >= -tol.psd_tol * norm.max(1.0)
}
