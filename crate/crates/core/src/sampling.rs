//! Seeded random states, unitaries, and operator triples.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::exponents::HypothesisPair;
use crate::operator::{ComplexMatrix, DensityOperator, HermitianOperator, ToleranceConfig, C64};

/// Mixing weight with the maximally mixed state that keeps sampled states full rank.
pub const SAMPLE_SMOOTHING: f64 = 1e-6;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries `(x + iy) / sqrt(2)` with `x, y` standard normal.
pub fn complex_gaussian<R: Rng>(rng: &mut R, d: usize) -> DMatrix<C64> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(d, d, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re * scale, im * scale)
    })
}

/// `(1 - delta) G G* / Tr(G G*) + delta I / d` with `delta = SAMPLE_SMOOTHING`.
pub fn random_density<R: Rng>(rng: &mut R, d: usize) -> DensityOperator {
    let g = complex_gaussian(rng, d);
    let gg = HermitianOperator::from_matrix_unchecked(&g * g.adjoint());
    let rho = gg.scale(1.0 / gg.trace());
    let tol = ToleranceConfig::default();
    DensityOperator::new(rho, &tol).expect("normalized Gram matrix is a state").smoothed(SAMPLE_SMOOTHING)
}

pub fn random_pair<R: Rng>(rng: &mut R, d: usize, tol: ToleranceConfig) -> Result<HypothesisPair> {
    let rho = random_density(rng, d);
    let sigma = random_density(rng, d);
    HypothesisPair::new(rho, sigma, tol)
}

/// A probability vector with squared-Gaussian weights, smoothed like states.
pub fn random_probabilities<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..d)
        .map(|_| {
            let x: f64 = StandardNormal.sample(rng);
            let y: f64 = StandardNormal.sample(rng);
            x * x + y * y
        })
        .collect();
    let total: f64 = w.iter().sum();
    w.iter().map(|x| (1.0 - SAMPLE_SMOOTHING) * x / total + SAMPLE_SMOOTHING / d as f64).collect()
}

pub fn random_diagonal_pair<R: Rng>(rng: &mut R, d: usize, tol: ToleranceConfig) -> Result<HypothesisPair> {
    let p = random_probabilities(rng, d);
    let q = random_probabilities(rng, d);
    HypothesisPair::diagonal(&p, &q, tol)
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn random_unitary<R: Rng>(rng: &mut R, d: usize) -> DMatrix<C64> {
    let (mut q, r) = complex_gaussian(rng, d).qr().unpack();
    for j in 0..d {
        let z = r[(j, j)];
        let phase = if z.norm() > 0.0 { z / z.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn random_hermitian<R: Rng>(rng: &mut R, d: usize) -> HermitianOperator {
    HermitianOperator::from_matrix_unchecked(complex_gaussian(rng, d))
}

/// `(A, X, Y)` with `A = G G*` positive semidefinite and `X, Y` arbitrary.
pub fn random_convexity_triple<R: Rng>(rng: &mut R, d: usize) -> (HermitianOperator, ComplexMatrix, ComplexMatrix) {
    let g = complex_gaussian(rng, d);
    let a = HermitianOperator::from_matrix_unchecked(&g * g.adjoint());
    let x = ComplexMatrix::new(complex_gaussian(rng, d)).expect("square");
    let y = ComplexMatrix::new(complex_gaussian(rng, d)).expect("square");
    (a, x, y)
}
