//! Classical reductions for commuting hypotheses.

use super::legendre::S_MIN;
use super::optimize::{first_argmax, refine_on_grid, uniform_grid, OptimizerConfig};
use crate::error::{Error, Result};

const SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalDistribution(Vec<f64>);

impl ClassicalDistribution {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        if let Some(p) = probabilities.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidDistribution(format!("negative or non-finite probability {p}")));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(Self(probabilities))
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_pair(p: &ClassicalDistribution, q: &ClassicalDistribution) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), found: q.len() });
    }
    Ok(())
}

/// `Psi(s) = sum_x p(x)^{1-s} q(x)^s`, with terms where `p(x) = 0` set to zero.
pub fn classical_psi(p: &ClassicalDistribution, q: &ClassicalDistribution, s: f64) -> Result<f64> {
    check_pair(p, q)?;
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::ParameterOutOfRange { name: "s", value: s, lo: 0.0, hi: 1.0 });
    }
    Ok(p.0
        .iter()
        .zip(&q.0)
        .map(|(&px, &qx)| {
            if px == 0.0 {
                0.0
            } else if qx == 0.0 {
                if s == 0.0 { px } else { 0.0 }
            } else {
                px.powf(1.0 - s) * qx.powf(s)
            }
        })
        .sum())
}

/// `-log Psi(s)`, the exponent that enters the Hoeffding bound.
pub fn classical_exponent(p: &ClassicalDistribution, q: &ClassicalDistribution, s: f64) -> Result<f64> {
    Ok(-classical_psi(p, q, s)?.ln())
}

/// `max_{0<s<=1} (-log Psi(s) - (1 - s) r) / s`, with `s >= S_MIN`.
pub fn classical_hoeffding_with(
    p: &ClassicalDistribution,
    q: &ClassicalDistribution,
    r: f64,
    cfg: &OptimizerConfig,
) -> Result<f64> {
    check_pair(p, q)?;
    if !(r > 0.0) {
        return Err(Error::NonpositiveRate(r));
    }
    if p.0.iter().chain(&q.0).any(|&x| x == 0.0) {
        return Err(Error::InvalidDistribution("p and q need full common support".into()));
    }
    cfg.validate()?;
    let objective = |s: f64| Ok((classical_exponent(p, q, s)? - (1.0 - s) * r) / s);
    let mut grid = uniform_grid(0.0, 1.0, cfg.grid_points);
    grid[0] = S_MIN;
    let values = grid.iter().map(|&s| objective(s)).collect::<Result<Vec<_>>>()?;
    if first_argmax(&values) == 0 {
        return Err(Error::RateTooSmall { rate: r, s_min: S_MIN });
    }
    Ok(refine_on_grid(objective, &grid, &values, cfg.refine_iterations)?.value)
}

pub fn classical_hoeffding(p: &ClassicalDistribution, q: &ClassicalDistribution, r: f64) -> Result<f64> {
    classical_hoeffding_with(p, q, r, &OptimizerConfig::default())
}
