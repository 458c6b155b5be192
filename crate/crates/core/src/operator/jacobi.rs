//! Cyclic Jacobi eigensolver for dense complex Hermitian matrices.
//!
//! Each rotation annihilates one off-diagonal pair `(p, q)`. The phase of
//! `a_pq` is first absorbed by a diagonal unitary so the 2x2 subproblem is
//! real symmetric, then a classical Jacobi rotation is applied. Sweeps visit
//! pairs in row-major order, so results are deterministic.

use nalgebra::DMatrix;

use super::matrix::C64;

/// Sweeps stop once the off-diagonal Frobenius norm falls below this
/// fraction of the input's Frobenius norm.
pub const CONVERGENCE_REL: f64 = 1e-13;

const MAX_SWEEPS: usize = 100;

/// Ascending eigenvalues with matching unit eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

pub fn eigh(m: &DMatrix<C64>) -> Eigh {
    let (values, vectors) = run(m, true);
    Eigh { values, vectors: vectors.expect("vectors requested") }
}

/// Ascending eigenvalues only.
pub fn eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    run(m, false).0
}

fn run(m: &DMatrix<C64>, want_vectors: bool) -> (Vec<f64>, Option<DMatrix<C64>>) {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "eigensolver needs a square matrix");
    // Column-major working copy of the Hermitian part.
    let mut a: Vec<C64> = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            a.push((m[(i, j)] + m[(j, i)].conj()) * 0.5);
        }
    }
    let mut v: Option<Vec<C64>> = want_vectors.then(|| {
        let mut id = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            id[i + i * n] = C64::new(1.0, 0.0);
        }
        id
    });
    for i in 0..n {
        a[i + i * n].im = 0.0;
    }

    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = CONVERGENCE_REL * total;
    let mut polished = false;
    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&a, n);
        if off <= threshold || off == 0.0 {
            // One extra sweep after convergence sharpens the eigenvectors.
            if polished || off == 0.0 {
                break;
            }
            polished = true;
        }
        sweep(&mut a, v.as_deref_mut(), n);
    }

    let mut values: Vec<f64> = (0..n).map(|i| a[i + i * n].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| values[x].total_cmp(&values[y]));
    values = order.iter().map(|&k| values[k]).collect();
    let vectors = v.map(|v| DMatrix::from_fn(n, n, |i, j| v[i + order[j] * n]));
    (values, vectors)
}

fn off_diagonal_norm(a: &[C64], n: usize) -> f64 {
    let mut acc = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                acc += a[i + j * n].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn sweep(a: &mut [C64], mut v: Option<&mut [C64]>, n: usize) {
    for p in 0..n {
        for q in (p + 1)..n {
            let apq = a[p + q * n];
            let b = apq.norm();
            if b == 0.0 {
                continue;
            }
            let app = a[p + p * n].re;
            let aqq = a[q + q * n].re;
            if app.abs() + 1e3 * b == app.abs() && aqq.abs() + 1e3 * b == aqq.abs() {
                a[p + q * n] = C64::new(0.0, 0.0);
                a[q + p * n] = C64::new(0.0, 0.0);
                continue;
            }
            let phase = apq / b;
            let theta = (aqq - app) / (2.0 * b);
            let t = if theta == 0.0 {
                1.0
            } else {
                theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
            };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            let sc = phase.conj() * s;
            let cc = phase.conj() * c;

            // Columns p, q of A V for rows other than p, q; rows follow by symmetry.
            for k in 0..n {
                if k == p || k == q {
                    continue;
                }
                let x = a[k + p * n];
                let y = a[k + q * n];
                let new_p = x * c - sc * y;
                let new_q = x * s + cc * y;
                a[k + p * n] = new_p;
                a[k + q * n] = new_q;
                a[p + k * n] = new_p.conj();
                a[q + k * n] = new_q.conj();
            }
            a[p + p * n] = C64::new(app - t * b, 0.0);
            a[q + q * n] = C64::new(aqq + t * b, 0.0);
            a[p + q * n] = C64::new(0.0, 0.0);
            a[q + p * n] = C64::new(0.0, 0.0);

            if let Some(v) = v.as_deref_mut() {
                let (col_p, col_q) = (p * n, q * n);
                for k in 0..n {
                    let x = v[k + col_p];
                    let y = v[k + col_q];
                    v[k + col_p] = x * c - sc * y;
                    v[k + col_q] = x * s + cc * y;
                }
            }
        }
    }
}
