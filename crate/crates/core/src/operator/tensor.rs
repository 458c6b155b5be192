use nalgebra::DMatrix;

use super::matrix::{DensityOperator, HermitianOperator, C64};
use super::spectral::SpectralDecomposition;
use super::tolerance::ToleranceConfig;
use crate::error::{Error, Result};

/// `d^n`, or an error when it passes `max_dimension`.
pub fn checked_power_dim(d: usize, n: usize, tol: &ToleranceConfig) -> Result<usize> {
    if n == 0 {
        return Err(Error::ZeroBlockCount);
    }
    let mut dim: usize = 1;
    for _ in 0..n {
        dim = dim.checked_mul(d).filter(|&x| x <= tol.max_dimension).ok_or(Error::DimensionBudgetExceeded {
            dim: d.saturating_pow(n as u32),
            max: tol.max_dimension,
        })?;
    }
    Ok(dim)
}

pub(crate) fn kron_power(m: &DMatrix<C64>, n: usize) -> DMatrix<C64> {
    let mut acc = m.clone();
    for _ in 1..n {
        acc = acc.kronecker(m);
    }
    acc
}

/// `A^{(x)n}`.
pub fn tensor_power(a: &HermitianOperator, n: usize, tol: &ToleranceConfig) -> Result<HermitianOperator> {
    checked_power_dim(a.dim(), n, tol)?;
    Ok(HermitianOperator::from_matrix_unchecked(kron_power(a.matrix(), n)))
}

pub fn tensor_power_density(rho: &DensityOperator, n: usize, tol: &ToleranceConfig) -> Result<DensityOperator> {
    tensor_power(rho.operator(), n, tol).map(DensityOperator::from_operator_unchecked)
}

/// Spectral decomposition of `A^{(x)n}` assembled from that of `A`.
///
/// Eigenvectors are Kronecker products of those of `A`. A product vector's
/// eigenvalue depends only on its type, the number of factors drawn from
/// each eigenvalue cluster of `A`, so eigenspaces are unions of type
/// classes. Each type's eigenvalue is computed as `prod_c a_c^{k_c}`, and
/// two types are merged only when their eigenvalues agree to
/// `cluster_rel_tol` relative to the larger of the two. Comparing against
/// the spectral norm instead would merge genuinely distinct eigenvalues of
/// high powers, which fall below `cluster_rel_tol * norm` as `n` grows.
pub fn tensor_power_decomposition(
    base: &SpectralDecomposition,
    n: usize,
    tol: &ToleranceConfig,
) -> Result<SpectralDecomposition> {
    tensor_power_decomposition_ordered(base, n, tol).map(|(dec, _)| dec)
}

/// Also returns, for each eigenvector column, its index in the Kronecker
/// product basis of the base eigenvectors.
pub(crate) fn tensor_power_decomposition_ordered(
    base: &SpectralDecomposition,
    n: usize,
    tol: &ToleranceConfig,
) -> Result<(SpectralDecomposition, Vec<usize>)> {
    let dim = checked_power_dim(base.dim(), n, tol)?;
    let d = base.dim();
    let labels = base.cluster_labels();
    let distinct = base.distinct_eigenvalues();
    let types: Vec<Vec<u32>> = (0..dim)
        .map(|mut j| {
            let mut counts = vec![0u32; distinct.len()];
            for _ in 0..n {
                counts[labels[j % d]] += 1;
                j /= d;
            }
            counts
        })
        .collect();
    let value_of = |counts: &[u32]| -> f64 {
        counts.iter().zip(distinct).map(|(&k, &x)| x.powi(k as i32)).product()
    };
    let values: Vec<f64> = types.iter().map(|t| value_of(t)).collect();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&x, &y| values[x].total_cmp(&values[y]).then_with(|| types[x].cmp(&types[y])).then(x.cmp(&y)));

    let mut clusters = Vec::new();
    let mut start = 0;
    for k in 1..dim {
        let (x, y) = (values[order[k - 1]], values[order[k]]);
        let same_type = types[order[k - 1]] == types[order[k]];
        if !same_type && (y - x) > tol.cluster_rel_tol * x.abs().max(y.abs()) {
            clusters.push(start..k);
            start = k;
        }
    }
    clusters.push(start..dim);
    let sorted: Vec<f64> = order.iter().map(|&k| values[k]).collect();
    let cluster_values =
        clusters.iter().map(|r| sorted[r.clone()].iter().sum::<f64>() / r.len() as f64).collect();
    let vectors = kron_power(base.eigenvectors(), n);
    let sorted_vectors = DMatrix::from_fn(dim, dim, |i, j| vectors[(i, order[j])]);
    Ok((SpectralDecomposition::from_clusters(sorted, sorted_vectors, clusters, cluster_values, tol), order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::spectral::eigendecompose;

    #[test]
    fn n_one_is_identity_map() {
        let tol = ToleranceConfig::default();
        let a = HermitianOperator::diagonal(&[0.9, 0.1]);
        assert_eq!(tensor_power(&a, 1, &tol).unwrap(), a);
    }

    #[test]
    fn diagonal_kronecker_square() {
        let tol = ToleranceConfig::default();
        let a = HermitianOperator::diagonal(&[0.9, 0.1]);
        let sq = tensor_power(&a, 2, &tol).unwrap();
        let expected = HermitianOperator::diagonal(&[0.81, 0.09, 0.09, 0.01]);
        assert!(sq.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn budget_is_enforced() {
        let tol = ToleranceConfig { max_dimension: 16, ..Default::default() };
        let a = HermitianOperator::identity(2);
        assert!(tensor_power(&a, 4, &tol).is_ok());
        assert!(matches!(tensor_power(&a, 5, &tol), Err(Error::DimensionBudgetExceeded { dim: 32, max: 16 })));
        assert!(matches!(tensor_power(&a, 0, &tol), Err(Error::ZeroBlockCount)));
    }

    #[test]
    fn structured_decomposition_matches_dense() {
        let tol = ToleranceConfig::default();
        let a = HermitianOperator::from_matrix_unchecked(DMatrix::from_row_slice(
            2,
            2,
            &[C64::new(0.6, 0.0), C64::new(0.1, 0.15), C64::new(0.1, -0.15), C64::new(0.4, 0.0)],
        ));
        let power = tensor_power(&a, 3, &tol).unwrap();
        let dense = eigendecompose(&power, &tol);
        let structured = tensor_power_decomposition(&eigendecompose(&a, &tol), 3, &tol).unwrap();
        assert_eq!(dense.v(), 4);
        assert_eq!(structured.v(), 4);
        assert_eq!(dense.multiplicities(), structured.multiplicities());
        for (x, y) in dense.distinct_eigenvalues().iter().zip(structured.distinct_eigenvalues()) {
            assert!((x - y).abs() < 1e-14);
        }
        for i in 0..4 {
            assert!(dense.projection(i).max_abs_diff(&structured.projection(i)) < 1e-10);
        }
        assert!(structured.reconstruct().max_abs_diff(&power) < 1e-14);
    }

    #[test]
    fn small_product_eigenvalues_stay_distinct() {
        let tol = ToleranceConfig::default();
        let a = HermitianOperator::diagonal(&[1.0 - 1e-7, 1e-7]);
        let dec = tensor_power_decomposition(&eigendecompose(&a, &tol), 8, &tol).unwrap();
        assert_eq!(dec.v(), 9);
        assert_eq!(dec.multiplicities(), vec![1, 8, 28, 56, 70, 56, 28, 8, 1]);
        let smallest = dec.distinct_eigenvalues()[0];
        assert!((smallest / 1e-56 - 1.0).abs() < 1e-12);
        // A dense solve clusters against the norm and merges everything below 1e-10.
        assert!(eigendecompose(&tensor_power(&a, 8, &tol).unwrap(), &tol).v() < 9);
    }

    #[test]
    fn degenerate_base_merges_types() {
        let tol = ToleranceConfig::default();
        let a = HermitianOperator::diagonal(&[0.25, 0.25, 0.5]);
        let dec = tensor_power_decomposition(&eigendecompose(&a, &tol), 2, &tol).unwrap();
        assert_eq!(dec.v(), 3);
        let b = HermitianOperator::diagonal(&[0.2, 0.4, 0.8]);
        // 0.2 * 0.8 and 0.4 * 0.4 coincide although the types differ.
        let dec = tensor_power_decomposition(&eigendecompose(&b, &tol), 2, &tol).unwrap();
        assert_eq!(dec.v(), 5);
    }
}
