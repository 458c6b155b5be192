//! One-dimensional maximization: golden-section search and dense grid scans
//! refined by golden section inside the best bracket.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub grid_points: usize,
    pub refine_iterations: usize,
    pub bisection_tol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { grid_points: 2001, refine_iterations: 60, bisection_tol: 1e-10 }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 3 {
            return Err(Error::InvalidOptimizerConfig(format!("grid_points = {} < 3", self.grid_points)));
        }
        if self.refine_iterations < 1 {
            return Err(Error::InvalidOptimizerConfig("refine_iterations must be >= 1".into()));
        }
        if !(self.bisection_tol > 0.0) {
            return Err(Error::InvalidOptimizerConfig(format!("bisection_tol = {}", self.bisection_tol)));
        }
        Ok(())
    }
}

/// A maximizer and the objective value there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Maximum {
    pub argmax: f64,
    pub value: f64,
}

/// Objective values this close are treated as ties.
fn tie_width(v: f64) -> f64 {
    8.0 * f64::EPSILON * (1.0 + v.abs())
}

fn beats(candidate: f64, incumbent: f64) -> bool {
    candidate > incumbent + tie_width(incumbent)
}

impl Maximum {
    /// Replaces `self` when `(x, v)` is better beyond rounding, or ties at a smaller `x`.
    fn offer(&mut self, x: f64, v: f64) {
        let tie = (v - self.value).abs() <= tie_width(self.value);
        if beats(v, self.value) || (tie && x < self.argmax) {
            self.argmax = x;
            self.value = v;
        }
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`.
/// Returns the best point evaluated, including the endpoints.
pub fn golden_section_max<F>(mut f: F, lo: f64, hi: f64, iterations: usize) -> Result<Maximum>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut best = Maximum { argmax: lo, value: f(lo)? };
    best.offer(hi, f(hi)?);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    best.offer(c, fc);
    best.offer(d, fd);
    for _ in 0..iterations {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
            best.offer(c, fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
            best.offer(d, fd);
        }
    }
    Ok(best)
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|k| if k + 1 == n { hi } else { lo + step * k as f64 }).collect()
}

/// Index of the first maximal value, up to rounding-level ties.
pub fn first_argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (k, &v) in values.iter().enumerate() {
        if beats(v, values[best]) {
            best = k;
        }
    }
    best
}

/// Maximum over precomputed grid samples, refined by golden section on the
/// two cells around the best sample; `f` must agree with `values` on `grid`.
pub fn refine_on_grid<F>(f: F, grid: &[f64], values: &[f64], iterations: usize) -> Result<Maximum>
where
    F: FnMut(f64) -> Result<f64>,
{
    let k = first_argmax(values);
    let grid_best = Maximum { argmax: grid[k], value: values[k] };
    let lo = grid[k.saturating_sub(1)];
    let hi = grid[(k + 1).min(grid.len() - 1)];
    let refined = golden_section_max(f, lo, hi, iterations)?;
    Ok(if beats(refined.value, grid_best.value) || (refined.value >= grid_best.value && refined.argmax < grid_best.argmax) {
        refined
    } else {
        grid_best
    })
}

/// Dense uniform scan of `[lo, hi]` followed by golden-section refinement.
pub fn scan_and_refine<F>(mut f: F, lo: f64, hi: f64, cfg: &OptimizerConfig) -> Result<Maximum>
where
    F: FnMut(f64) -> Result<f64>,
{
    let grid = uniform_grid(lo, hi, cfg.grid_points);
    let values = grid.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    refine_on_grid(f, &grid, &values, cfg.refine_iterations)
}
