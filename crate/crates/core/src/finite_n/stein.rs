use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::bounds_from_phi_bar;
use super::context::{ErrorProbabilities, FiniteNContext};
use crate::error::{Error, Result};
use crate::exponents::{phi_bar, relative_entropy, HypothesisPair};
use crate::format::fmt_f64;

/// Errors of the pinched test at one `n`, next to their envelopes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteinPoint {
    pub errors: ErrorProbabilities,
    /// `(n+1)^d e^{-n phi_bar(a)}`.
    pub alpha_bound: f64,
    /// `(1/n) log beta_n`.
    pub beta_rate: f64,
    /// `-a + (d/n) log(n+1)`.
    pub beta_rate_bound: f64,
}

/// Pinched-test errors for `n = 1..=n_max` at a fixed `a < D(rho||sigma)`.
pub fn stein_trace(pair: &HypothesisPair, a: f64, n_max: usize) -> Result<Vec<SteinPoint>> {
    let divergence = relative_entropy(pair)?;
    if !(a < divergence) {
        return Err(Error::RateAboveDivergence { a, divergence });
    }
    if n_max == 0 {
        return Err(Error::ZeroBlockCount);
    }
    let phi = phi_bar(pair, a)?.value;
    let d = pair.dim();
    (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let ctx = FiniteNContext::new(pair, n)?;
            let errors = ctx.pinched_errors(a)?;
            let nf = n as f64;
            Ok(SteinPoint {
                errors,
                alpha_bound: bounds_from_phi_bar(n, d, a, phi).0,
                beta_rate: errors.beta.ln() / nf,
                beta_rate_bound: -a + d as f64 / nf * (nf + 1.0).ln(),
            })
        })
        .collect()
}

pub fn stein_trace_csv(points: &[SteinPoint]) -> String {
    let mut out = String::from("n,a,alpha,alpha_bound,beta,beta_rate,beta_rate_bound\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            p.errors.n,
            fmt_f64(p.errors.a),
            fmt_f64(p.errors.alpha),
            fmt_f64(p.alpha_bound),
            fmt_f64(p.errors.beta),
            fmt_f64(p.beta_rate),
            fmt_f64(p.beta_rate_bound)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::ToleranceConfig;

    #[test]
    fn identical_states_admit_no_rate() {
        let p = HypothesisPair::diagonal(&[0.3, 0.7], &[0.3, 0.7], ToleranceConfig::default()).unwrap();
        assert!(matches!(stein_trace(&p, 0.0, 3), Err(Error::RateAboveDivergence { .. })));
    }

    #[test]
    fn commuting_trace_respects_envelopes() {
        let p = HypothesisPair::diagonal(&[0.5, 0.5], &[0.9, 0.1], ToleranceConfig::default()).unwrap();
        let a = 0.9 * relative_entropy(&p).unwrap();
        let points = stein_trace(&p, a, 6).unwrap();
        assert_eq!(points.len(), 6);
        for (k, pt) in points.iter().enumerate() {
            assert_eq!(pt.errors.n, k + 1);
            assert!(pt.errors.alpha <= pt.alpha_bound + 1e-12);
            assert!(pt.beta_rate <= pt.beta_rate_bound);
        }
    }
}
