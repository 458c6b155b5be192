//! Finite-n probe of the conjectured exponents of the plain test.
//!
//! The rows are data only. Nothing here is asserted to hold.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::context::FiniteNContext;
use crate::error::Result;
use crate::exponents::{phi, HypothesisPair};
use crate::format::fmt_f64;

pub const EXPERIMENTAL_BANNER: &str =
    "EXPERIMENTAL: finite-n rates of the plain test {rho_n - e^(na) sigma_n > 0}; open problem, nothing asserted";

/// Slack on the rate comparisons recorded in `alpha_within` and `beta_within`.
pub const RATE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjectureRow {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    /// `(1/n) log alpha_n`; `-inf` when `alpha_n = 0`.
    pub alpha_rate: f64,
    /// `-phi(a)`.
    pub alpha_target: f64,
    /// `(1/n) log beta_n`.
    pub beta_rate: f64,
    /// `-(phi(a) + a)`.
    pub beta_target: f64,
    pub alpha_within: bool,
    pub beta_within: bool,
    /// False when the plain test sits below the resolution of a dense
    /// eigensolve; such rows are not trustworthy.
    pub resolved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub label: String,
    pub a: f64,
    pub phi: f64,
    pub rows: Vec<ConjectureRow>,
}

impl ConjectureReport {
    /// Banner as a `#` comment line, then the table.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# {}\n", self.label);
        out.push_str("n,a,alpha,beta,alpha_rate,alpha_target,beta_rate,beta_target,alpha_within,beta_within,resolved\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                r.n,
                fmt_f64(self.a),
                fmt_f64(r.alpha),
                fmt_f64(r.beta),
                fmt_f64(r.alpha_rate),
                fmt_f64(r.alpha_target),
                fmt_f64(r.beta_rate),
                fmt_f64(r.beta_target),
                r.alpha_within,
                r.beta_within,
                r.resolved
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn conjecture_probe(pair: &HypothesisPair, n_range: &[usize], a: f64) -> Result<ConjectureReport> {
    let phi = phi(pair, a)?.value;
    let rows = n_range
        .par_iter()
        .map(|&n| {
            let ctx = FiniteNContext::new(pair, n)?;
            let e = ctx.errors(&ctx.plain_test(a))?;
            let nf = n as f64;
            let (alpha_rate, beta_rate) = (e.alpha.ln() / nf, e.beta.ln() / nf);
            let (alpha_target, beta_target) = (-phi, -(phi + a));
            Ok(ConjectureRow {
                n,
                alpha: e.alpha,
                beta: e.beta,
                alpha_rate,
                alpha_target,
                beta_rate,
                beta_target,
                alpha_within: alpha_rate <= alpha_target + RATE_SLACK,
                beta_within: beta_rate <= beta_target + RATE_SLACK,
                resolved: ctx.plain_test_resolved(a),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConjectureReport { label: EXPERIMENTAL_BANNER.to_string(), a, phi, rows })
}
