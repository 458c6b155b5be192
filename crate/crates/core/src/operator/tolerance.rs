use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How rank-deficient states are treated wherever a negative power or a
/// logarithm of the state appears.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RankPolicy {
    /// Reject singular operators.
    Strict,
    /// Replace each state by `(1 - delta) * state + delta * I / d` before use.
    Smoothing { delta: f64 },
}

/// Numerical thresholds shared by every operator routine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Eigenvalues closer than `cluster_rel_tol * spectral_norm` are one cluster.
    pub cluster_rel_tol: f64,
    /// Allowed negative eigenvalue (absolute) for PSD checks.
    pub psd_tol: f64,
    /// Idempotence / orthogonality tolerance for projections.
    pub proj_tol: f64,
    /// Eigenvalues below `support_cutoff * max_eigenvalue` count as zero.
    pub support_cutoff: f64,
    /// Hermitian check: `max |M_ij - conj(M_ji)| <= hermitian_tol * (1 + norm)`.
    pub hermitian_tol: f64,
    /// Allowed deviation of a density operator's trace from 1.
    pub trace_tol: f64,
    /// Largest dimension that tensor powers may reach.
    pub max_dimension: usize,
    pub rank_policy: RankPolicy,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            cluster_rel_tol: 1e-10,
            psd_tol: 1e-10,
            proj_tol: 1e-9,
            support_cutoff: 1e-12,
            hermitian_tol: 1e-10,
            trace_tol: 1e-9,
            max_dimension: 4096,
            rank_policy: RankPolicy::Strict,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("cluster_rel_tol", self.cluster_rel_tol),
            ("psd_tol", self.psd_tol),
            ("proj_tol", self.proj_tol),
            ("support_cutoff", self.support_cutoff),
            ("hermitian_tol", self.hermitian_tol),
            ("trace_tol", self.trace_tol),
        ];
        for (name, value) in checks {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidTolerance { name, value });
            }
        }
        if self.max_dimension == 0 {
            return Err(Error::InvalidTolerance { name: "max_dimension", value: 0.0 });
        }
        if let RankPolicy::Smoothing { delta } = self.rank_policy {
            if !(delta > 0.0 && delta < 1.0) {
                return Err(Error::InvalidTolerance { name: "smoothing_delta", value: delta });
            }
        }
        Ok(())
    }

    pub fn is_strict(&self) -> bool {
        matches!(self.rank_policy, RankPolicy::Strict)
    }

    pub fn with_smoothing(mut self, delta: f64) -> Self {
        self.rank_policy = RankPolicy::Smoothing { delta };
        self
    }

    pub fn with_cluster_rel_tol(mut self, tol: f64) -> Self {
        self.cluster_rel_tol = tol;
        self
    }
}
