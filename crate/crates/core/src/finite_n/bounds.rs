use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::context::FiniteNContext;
use crate::error::Result;
use crate::exponents::{HypothesisPair, OptimizerConfig, PsiBarProfile};
use crate::format::fmt_f64;

/// Slack allowed when comparing exact errors against their bounds.
pub const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub a: f64,
    pub alpha: f64,
    pub alpha_bound: f64,
    pub beta: f64,
    pub beta_bound: f64,
    pub key_residual: f64,
    pub v_sigma_n: usize,
    pub type_bound: u64,
}

impl BoundReport {
    pub fn alpha_holds(&self) -> bool {
        self.alpha <= self.alpha_bound + BOUND_SLACK
    }

    pub fn beta_holds(&self) -> bool {
        self.beta <= self.beta_bound + BOUND_SLACK
    }

    pub fn type_count_holds(&self) -> bool {
        (self.v_sigma_n as u64) <= self.type_bound
    }

    pub fn holds(&self) -> bool {
        self.alpha_holds() && self.beta_holds() && self.type_count_holds()
    }
}

/// `(n+1)^d`, saturating.
pub fn type_bound(n: usize, d: usize) -> u64 {
    let base = n as u64 + 1;
    u32::try_from(d).ok().and_then(|d| base.checked_pow(d)).unwrap_or(u64::MAX)
}

fn prefactor(n: usize, d: usize) -> f64 {
    (n as f64 + 1.0).powf(d as f64)
}

/// `((n+1)^d e^{-n phi_bar}, (n+1)^d e^{-n (phi_bar + a)})`.
pub fn bounds_from_phi_bar(n: usize, d: usize, a: f64, phi_bar: f64) -> (f64, f64) {
    let c = prefactor(n, d);
    let nf = n as f64;
    (c * (-nf * phi_bar).exp(), c * (-nf * (phi_bar + a)).exp())
}

pub fn error_bounds(pair: &HypothesisPair, n: usize, a: f64) -> Result<(f64, f64)> {
    let phi = crate::exponents::phi_bar(pair, a)?.value;
    Ok(bounds_from_phi_bar(n, pair.dim(), a, phi))
}

/// Exact errors of the pinched test against both bounds, for every `(n, a)`.
/// Rows are ordered by `n` and then by `a`, as given.
pub fn verify_bounds(pair: &HypothesisPair, n_range: &[usize], a_grid: &[f64]) -> Result<Vec<BoundReport>> {
    let profile = PsiBarProfile::new(pair, OptimizerConfig::default())?;
    let phis = a_grid.par_iter().map(|&a| Ok(profile.phi_bar(a)?.value)).collect::<Result<Vec<f64>>>()?;
    let d = pair.dim();
    let per_n = n_range
        .par_iter()
        .map(|&n| {
            let ctx = FiniteNContext::new(pair, n)?;
            let key_residual = ctx.key_residual()?;
            let v_sigma_n = ctx.v_sigma_n();
            a_grid
                .par_iter()
                .zip(&phis)
                .map(|(&a, &phi)| {
                    let e = ctx.pinched_errors(a)?;
                    let (alpha_bound, beta_bound) = bounds_from_phi_bar(n, d, a, phi);
                    Ok(BoundReport {
                        n,
                        a,
                        alpha: e.alpha,
                        alpha_bound,
                        beta: e.beta,
                        beta_bound,
                        key_residual,
                        v_sigma_n,
                        type_bound: type_bound(n, d),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_n.into_iter().flatten().collect())
}

pub fn bound_reports_csv(reports: &[BoundReport]) -> String {
    let mut out = String::from("n,a,alpha,alpha_bound,beta,beta_bound,key_residual,v_sigma_n,type_bound\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.n,
            fmt_f64(r.a),
            fmt_f64(r.alpha),
            fmt_f64(r.alpha_bound),
            fmt_f64(r.beta),
            fmt_f64(r.beta_bound),
            fmt_f64(r.key_residual),
            r.v_sigma_n,
            r.type_bound
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::relative_entropy;
    use crate::operator::{ComplexMatrix, DensityOperator, ToleranceConfig, C64};

    fn generic() -> HypothesisPair {
        let tol = ToleranceConfig::default();
        let c = |re, im| C64::new(re, im);
        let rho = ComplexMatrix::from_rows(&[vec![c(0.8, 0.0), c(0.1, 0.25)], vec![c(0.1, -0.25), c(0.2, 0.0)]]).unwrap();
        let sigma = ComplexMatrix::from_rows(&[vec![c(0.3, 0.0), c(0.2, 0.0)], vec![c(0.2, 0.0), c(0.7, 0.0)]]).unwrap();
        HypothesisPair::new(DensityOperator::from_complex(rho, &tol).unwrap(), DensityOperator::from_complex(sigma, &tol).unwrap(), tol)
            .unwrap()
    }

    #[test]
    fn identical_states_have_vacuous_alpha_bound() {
        let tol = ToleranceConfig::default();
        let p = HypothesisPair::diagonal(&[0.3, 0.7], &[0.3, 0.7], tol).unwrap();
        for n in [1, 3] {
            let (ab, bb) = error_bounds(&p, n, 0.4).unwrap();
            let c = ((n + 1) * (n + 1)) as f64;
            assert!((ab - c).abs() < 1e-12 * c);
            assert!((bb - c * (-(n as f64) * 0.4).exp()).abs() < 1e-12 * c);
        }
        assert_eq!(type_bound(1, 2), 4);
    }

    #[test]
    fn bounds_hold_and_v_counts_types() {
        let p = generic();
        let d = relative_entropy(&p).unwrap();
        let a_grid: Vec<f64> = [0.25, 0.5, 0.75, 0.9].iter().map(|k| k * d).collect();
        let reports = verify_bounds(&p, &[1, 2, 3, 4, 5, 6], &a_grid).unwrap();
        assert_eq!(reports.len(), 24);
        for r in &reports {
            assert!(r.holds(), "{r:?}");
            assert_eq!(r.v_sigma_n, r.n + 1);
            assert!(r.key_residual >= -1e-9);
        }
        assert_eq!(reports[0].n, 1);
        assert_eq!(reports[23].n, 6);
    }

    #[test]
    fn csv_header_and_integers() {
        let p = generic();
        let csv = bound_reports_csv(&verify_bounds(&p, &[2], &[0.1]).unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,a,alpha,alpha_bound,beta,beta_bound,key_residual,v_sigma_n,type_bound");
        assert!(lines[1].starts_with("2,"));
        assert!(lines[1].ends_with(",3,9"));
    }
}
