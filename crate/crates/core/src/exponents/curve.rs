use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::functions::{psi, psi_bar};
use super::legendre::{phi_with, PsiBarProfile};
use super::optimize::OptimizerConfig;
use super::pair::HypothesisPair;
use crate::error::{Error, Result};
use crate::format::fmt_f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    PsiBar,
    Psi,
    PhiBar,
    Phi,
}

impl CurveKind {
    pub const ALL: [CurveKind; 4] = [CurveKind::PsiBar, CurveKind::Psi, CurveKind::PhiBar, CurveKind::Phi];

    pub fn parameter(self) -> Parameter {
        match self {
            CurveKind::PsiBar | CurveKind::Psi => Parameter::S,
            CurveKind::PhiBar | CurveKind::Phi => Parameter::A,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CurveKind::PsiBar => "psi_bar",
            CurveKind::Psi => "psi",
            CurveKind::PhiBar => "phi_bar",
            CurveKind::Phi => "phi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameter {
    S,
    A,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub param: f64,
    pub value: f64,
    pub argmax_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentCurve {
    pub parameter_name: Parameter,
    pub samples: Vec<CurveSample>,
}

impl ExponentCurve {
    /// Checks strictly increasing parameters and `argmax_s` in `[0, 1]`.
    pub fn new(parameter_name: Parameter, samples: Vec<CurveSample>) -> Result<Self> {
        if samples.windows(2).any(|w| !(w[0].param < w[1].param)) {
            return Err(Error::InvalidGrid("curve parameters must be strictly increasing".into()));
        }
        if let Some(bad) = samples.iter().filter_map(|c| c.argmax_s).find(|s| !(0.0..=1.0).contains(s)) {
            return Err(Error::InvalidGrid(format!("argmax_s = {bad} outside [0, 1]")));
        }
        Ok(Self { parameter_name, samples })
    }

    pub fn values(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.value).collect()
    }

    /// `param,value,argmax_s` with 17 significant digits; absent argmax is empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("param,value,argmax_s\n");
        for c in &self.samples {
            let argmax = c.argmax_s.map(fmt_f64).unwrap_or_default();
            out.push_str(&format!("{},{},{}\n", fmt_f64(c.param), fmt_f64(c.value), argmax));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve serializes")
    }
}

pub(crate) fn check_grid(grid: &[f64], unit_interval: bool) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidGrid("non-finite grid point".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidGrid("grid must be strictly increasing".into()));
    }
    if unit_interval && (grid[0] < 0.0 || grid[grid.len() - 1] > 1.0) {
        return Err(Error::InvalidGrid("s-grid must lie within [0, 1]".into()));
    }
    Ok(())
}

pub fn sweep_curve_with(
    pair: &HypothesisPair,
    which: CurveKind,
    grid: &[f64],
    cfg: &OptimizerConfig,
) -> Result<ExponentCurve> {
    check_grid(grid, which.parameter() == Parameter::S)?;
    let samples: Vec<CurveSample> = match which {
        CurveKind::PsiBar | CurveKind::Psi => {
            let f = if which == CurveKind::PsiBar { psi_bar } else { psi };
            grid.par_iter()
                .map(|&s| Ok(CurveSample { param: s, value: f(pair, s)?, argmax_s: None }))
                .collect::<Result<_>>()?
        }
        CurveKind::PhiBar => {
            let profile = PsiBarProfile::new(pair, *cfg)?;
            grid.par_iter()
                .map(|&a| {
                    let m = profile.phi_bar(a)?;
                    Ok(CurveSample { param: a, value: m.value, argmax_s: Some(m.argmax) })
                })
                .collect::<Result<_>>()?
        }
        CurveKind::Phi => grid
            .par_iter()
            .map(|&a| {
                let m = phi_with(pair, a, cfg)?;
                Ok(CurveSample { param: a, value: m.value, argmax_s: Some(m.argmax) })
            })
            .collect::<Result<_>>()?,
    };
    ExponentCurve::new(which.parameter(), samples)
}

pub fn sweep_curve(pair: &HypothesisPair, which: CurveKind, grid: &[f64]) -> Result<ExponentCurve> {
    sweep_curve_with(pair, which, grid, &OptimizerConfig::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::functions::relative_entropy;
    use crate::grid::range_grid;
    use crate::operator::ToleranceConfig;

    fn pair() -> HypothesisPair {
        HypothesisPair::diagonal(&[0.5, 0.5], &[0.9, 0.1], ToleranceConfig::default()).unwrap()
    }

    #[test]
    fn psi_bar_curve_starts_at_origin() {
        let curve = sweep_curve(&pair(), CurveKind::PsiBar, &range_grid(0.0, 1.0, 0.1).unwrap()).unwrap();
        assert_eq!(curve.samples[0].param, 0.0);
        assert!(curve.samples[0].value.abs() < 1e-15);
        assert!(curve.samples.iter().all(|c| c.argmax_s.is_none()));
    }

    #[test]
    fn phi_bar_curve_nonincreasing_with_argmax() {
        let p = pair();
        let d = relative_entropy(&p).unwrap();
        let grid = range_grid(-1.0, d + 0.5, 0.05).unwrap();
        let curve = sweep_curve(&p, CurveKind::PhiBar, &grid).unwrap();
        let v = curve.values();
        assert!(v.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(curve.samples.iter().all(|c| c.argmax_s.is_some()));
    }

    #[test]
    fn csv_layout() {
        let curve = ExponentCurve::new(
            Parameter::A,
            vec![
                CurveSample { param: 0.5, value: 0.1, argmax_s: Some(0.25) },
                CurveSample { param: 1.0, value: 0.0, argmax_s: None },
            ],
        )
        .unwrap();
        let csv = curve.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "param,value,argmax_s");
        assert_eq!(lines[1], "5.0000000000000000e-1,1.0000000000000001e-1,2.5000000000000000e-1");
        assert!(lines[2].ends_with(','));
        let back: ExponentCurve = serde_json::from_str(&curve.to_json()).unwrap();
        assert_eq!(back, curve);
    }

    #[test]
    fn rejects_bad_grids() {
        let p = pair();
        assert!(sweep_curve(&p, CurveKind::Psi, &[0.5, 0.2]).is_err());
        assert!(sweep_curve(&p, CurveKind::Psi, &[0.5, 1.2]).is_err());
        assert!(sweep_curve(&p, CurveKind::Phi, &[]).is_err());
        assert!(sweep_curve(&p, CurveKind::Phi, &[-3.0, 5.0]).is_ok());
    }
}
