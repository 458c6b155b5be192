//! Legendre-type transforms of the exponent functions: `phi_bar`, `phi`,
//! the Hoeffding-type rate `u_bar(r)`, and the rate parameter `a_r`.

use super::functions::{psi, psi_bar, relative_entropy};
use super::optimize::{first_argmax, golden_section_max, refine_on_grid, uniform_grid, Maximum, OptimizerConfig};
use super::pair::HypothesisPair;
use crate::error::{Error, Result};

/// Lower cutoff for `s` in `(psi_bar(s) - (1 - s) r) / s`.
pub const S_MIN: f64 = 1e-6;

/// Lower bracket limit when searching for `a_r`.
pub const LOWER_BRACKET_LIMIT: f64 = -1e6;

const MAX_BISECTION_STEPS: usize = 400;

/// `psi_bar` sampled once on a uniform `s`-grid of `[0, 1]`.
///
/// The grid samples do not depend on `a` or `r`, so one profile serves any
/// number of `phi_bar`, `u_bar`, and `a_r` evaluations on the same pair.
#[derive(Debug, Clone)]
pub struct PsiBarProfile<'a> {
    pair: &'a HypothesisPair,
    cfg: OptimizerConfig,
    grid: Vec<f64>,
    values: Vec<f64>,
    at_s_min: f64,
}

impl<'a> PsiBarProfile<'a> {
    pub fn new(pair: &'a HypothesisPair, cfg: OptimizerConfig) -> Result<Self> {
        cfg.validate()?;
        let grid = uniform_grid(0.0, 1.0, cfg.grid_points);
        let values = grid.iter().map(|&s| psi_bar(pair, s)).collect::<Result<Vec<_>>>()?;
        let at_s_min = psi_bar(pair, S_MIN)?;
        Ok(Self { pair, cfg, grid, values, at_s_min })
    }

    pub fn pair(&self) -> &HypothesisPair {
        self.pair
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `phi_bar(a) = max_{0<=s<=1} psi_bar(s) - a s`, with the maximizing `s`.
    pub fn phi_bar(&self, a: f64) -> Result<Maximum> {
        let objective: Vec<f64> = self.grid.iter().zip(&self.values).map(|(&s, &v)| v - a * s).collect();
        refine_on_grid(|s| Ok(psi_bar(self.pair, s)? - a * s), &self.grid, &objective, self.cfg.refine_iterations)
    }

    /// `u_bar(r) = max_{0<s<=1} (psi_bar(s) - (1 - s) r) / s`, with `s >= S_MIN`.
    pub fn hoeffding_rate(&self, r: f64) -> Result<Maximum> {
        if !(r > 0.0) {
            return Err(Error::NonpositiveRate(r));
        }
        let ratio = |s: f64, v: f64| (v - (1.0 - s) * r) / s;
        let mut grid = Vec::with_capacity(self.grid.len());
        let mut objective = Vec::with_capacity(self.grid.len());
        grid.push(S_MIN);
        objective.push(ratio(S_MIN, self.at_s_min));
        for (&s, &v) in self.grid.iter().zip(&self.values).skip(1) {
            grid.push(s);
            objective.push(ratio(s, v));
        }
        if first_argmax(&objective) == 0 {
            return Err(Error::RateTooSmall { rate: r, s_min: S_MIN });
        }
        refine_on_grid(|s| Ok(ratio(s, psi_bar(self.pair, s)?)), &grid, &objective, self.cfg.refine_iterations)
    }

    /// `a_r` with `phi_bar(a_r) = r`, by bisection on the nonincreasing `phi_bar`.
    pub fn solve_rate_parameter(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::NonpositiveRate(r));
        }
        let tol = self.cfg.bisection_tol;
        let divergence = relative_entropy(self.pair)?;
        let mut hi = divergence + 1.0;
        let mut step = 1.0;
        while self.phi_bar(hi)?.value >= r {
            step *= 2.0;
            hi = divergence + step;
            if step > -LOWER_BRACKET_LIMIT {
                return Err(Error::BracketFailure { rate: r, bound: hi });
            }
        }
        let mut lo = -1.0;
        while self.phi_bar(lo)?.value < r {
            lo *= 2.0;
            if lo < LOWER_BRACKET_LIMIT {
                return Err(Error::BracketFailure { rate: r, bound: LOWER_BRACKET_LIMIT });
            }
        }
        let mut mid = 0.5 * (lo + hi);
        for _ in 0..MAX_BISECTION_STEPS {
            mid = 0.5 * (lo + hi);
            let gap = self.phi_bar(mid)?.value - r;
            if gap.abs() <= tol || hi - lo <= f64::EPSILON * mid.abs().max(1.0) {
                break;
            }
            if gap > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(mid)
    }
}

pub fn phi_bar(pair: &HypothesisPair, a: f64) -> Result<Maximum> {
    PsiBarProfile::new(pair, OptimizerConfig::default())?.phi_bar(a)
}

/// `phi(a) = max_{0<=s<=1} psi(s) - a s`. `psi` is concave, so golden
/// section on `[0, 1]` (endpoints included) finds the global maximum.
pub fn phi_with(pair: &HypothesisPair, a: f64, cfg: &OptimizerConfig) -> Result<Maximum> {
    golden_section_max(|s| Ok(psi(pair, s)? - a * s), 0.0, 1.0, cfg.refine_iterations)
}

pub fn phi(pair: &HypothesisPair, a: f64) -> Result<Maximum> {
    phi_with(pair, a, &OptimizerConfig::default())
}

pub fn hoeffding_rate(pair: &HypothesisPair, r: f64) -> Result<f64> {
    Ok(PsiBarProfile::new(pair, OptimizerConfig::default())?.hoeffding_rate(r)?.value)
}

pub fn solve_rate_parameter(pair: &HypothesisPair, r: f64) -> Result<f64> {
    PsiBarProfile::new(pair, OptimizerConfig::default())?.solve_rate_parameter(r)
}
