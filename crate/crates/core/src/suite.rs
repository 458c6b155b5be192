//! The invariant suite behind `qht verify`: every checked property runs on
//! deterministic random inputs and reports its worst observed value.

use std::fmt;

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::exponents::{
    classical_hoeffding, phi, psi, psi_bar, psi_derivatives, relative_entropy, ClassicalDistribution, HypothesisPair,
    OptimizerConfig, PsiBarProfile,
};
use crate::finite_n::{verify_bounds, FiniteNContext};
use crate::grid::range_grid;
use crate::operator::{
    eigendecompose, min_eigenvalue, monotonicity_residual, operator_convexity_gap,
    HermitianOperator, ToleranceConfig, C64,
};
use crate::sampling::{
    random_convexity_triple, random_diagonal_pair, random_hermitian, random_pair, random_unitary, seeded_rng,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub pairs: usize,
    pub n_max: usize,
    pub dim: usize,
    pub tol: ToleranceConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 7, pairs: 20, n_max: 4, dim: 2, tol: ToleranceConfig::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    /// The observed quantity must not exceed the limit.
    AtMost,
    /// The observed quantity must not fall below the limit.
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub relation: Relation,
    pub limit: f64,
    pub worst: f64,
    pub cases: usize,
    pub failures: usize,
    pub error: Option<String>,
}

impl CheckOutcome {
    fn new(name: &'static str, relation: Relation, limit: f64) -> Self {
        let worst = match relation {
            Relation::AtMost => f64::NEG_INFINITY,
            Relation::AtLeast => f64::INFINITY,
        };
        Self { name, relation, limit, worst, cases: 0, failures: 0, error: None }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.error.is_none() && self.cases > 0
    }

    fn record(&mut self, value: f64) {
        self.cases += 1;
        let ok = match self.relation {
            Relation::AtMost => value <= self.limit,
            Relation::AtLeast => value >= self.limit,
        };
        if !ok {
            self.failures += 1;
        }
        self.worst = match self.relation {
            Relation::AtMost => self.worst.max(value),
            Relation::AtLeast => self.worst.min(value),
        };
        if value.is_nan() {
            self.worst = f64::NAN;
        }
    }

    fn record_result(&mut self, value: Result<f64>) {
        match value {
            Ok(v) => self.record(v),
            Err(e) => {
                self.cases += 1;
                self.failures += 1;
                self.error.get_or_insert_with(|| e.to_string());
            }
        }
    }

    fn merge(&mut self, other: CheckOutcome) {
        debug_assert_eq!(self.name, other.name);
        self.cases += other.cases;
        self.failures += other.failures;
        if self.error.is_none() {
            self.error = other.error;
        }
        self.worst = match self.relation {
            _ if self.worst.is_nan() || other.worst.is_nan() => f64::NAN,
            Relation::AtMost => self.worst.max(other.worst),
            Relation::AtLeast => self.worst.min(other.worst),
        };
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let op = match self.relation {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        };
        write!(f, "{status} {:<34} worst {:>12.4e} {op} {:.1e} over {} cases", self.name, self.worst, self.limit, self.cases)?;
        if self.failures > 0 {
            write!(f, " ({} failing)", self.failures)?;
        }
        if let Some(e) = &self.error {
            write!(f, " [error: {e}]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        let passed = self.checks.iter().filter(|c| c.passed()).count();
        out.push_str(&format!("{passed}/{} checks passed\n", self.checks.len()));
        out
    }
}

use Relation::{AtLeast, AtMost};

/// Every check, in report order.
const CHECKS: &[(&str, Relation, f64)] = &[
    ("spectral-round-trip", AtMost, 1e-10),
    ("projection-invariants", AtMost, 1e-9),
    ("pinching-commutation", AtMost, 1e-9),
    ("pinching-trace-identity", AtMost, 1e-9),
    ("key-inequality", AtLeast, -1e-9),
    ("type-counting", AtMost, 0.0),
    ("nondegenerate-type-count", AtMost, 0.0),
    ("monotonicity-consequence", AtLeast, -1e-8),
    ("convexity-residual", AtLeast, -1e-10),
    ("convexity-closed-form", AtMost, 1e-10),
    ("relative-entropy-nonnegative", AtLeast, 0.0),
    ("psi-order", AtMost, 1e-9),
    ("phi-order", AtMost, 1e-9),
    ("phi-bar-midpoint-convexity", AtMost, 1e-9),
    ("phi-bar-monotone", AtMost, 1e-9),
    ("phi-bar-zero-beyond-divergence", AtMost, 0.0),
    ("phi-bar-unbounded-below", AtLeast, 100.0),
    ("phi-bar-positive-below-divergence", AtLeast, f64::MIN_POSITIVE),
    ("psi-prime-finite-difference", AtMost, 1e-6),
    ("psi-second-finite-difference", AtMost, 1e-6),
    ("psi-prime-at-zero", AtMost, 1e-8),
    ("psi-second-negative", AtMost, -1e-12),
    ("hoeffding-two-routes", AtMost, 1e-7),
    ("rate-parameter-consistency", AtMost, 1e-8),
    ("commuting-psi-equality", AtMost, 1e-10),
    ("commuting-hoeffding", AtMost, 1e-9),
    ("unitary-invariance", AtMost, 1e-9),
    ("alpha-bound", AtMost, 0.0),
    ("beta-bound", AtMost, 0.0),
    ("test-idempotent", AtMost, 1e-9),
    ("test-commutes-with-sigma", AtMost, 1e-9),
    ("pinched-equals-plain-commuting", AtMost, 1e-10),
    ("probability-mass", AtMost, 1e-12),
    ("alpha-monotone-in-a", AtMost, 1e-12),
    ("beta-monotone-in-a", AtMost, 1e-12),
    ("stein-beta-rate", AtMost, 0.0),
];

struct Checks(Vec<CheckOutcome>);

impl Checks {
    fn new() -> Self {
        Self(CHECKS.iter().map(|&(n, r, l)| CheckOutcome::new(n, r, l)).collect())
    }

    fn get(&mut self, name: &str) -> &mut CheckOutcome {
        self.0.iter_mut().find(|c| c.name == name).unwrap_or_else(|| panic!("unknown check {name}"))
    }

    fn record(&mut self, name: &str, value: f64) {
        self.get(name).record(value);
    }

    fn record_result(&mut self, name: &str, value: Result<f64>) {
        self.get(name).record_result(value);
    }

    fn merge(mut self, other: Checks) -> Checks {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            a.merge(b);
        }
        self
    }
}

/// Deterministic inputs, drawn sequentially from one seeded stream so the
/// parallel evaluation below cannot change them.
struct Inputs {
    pairs: Vec<HypothesisPair>,
    diagonal: Vec<HypothesisPair>,
    hermitian: Vec<(HermitianOperator, HermitianOperator)>,
    triples: Vec<(HermitianOperator, crate::operator::ComplexMatrix, crate::operator::ComplexMatrix)>,
    unitaries: Vec<DMatrix<C64>>,
}

fn draw_inputs(cfg: &SuiteConfig) -> Result<Inputs> {
    let mut rng = seeded_rng(cfg.seed);
    let pairs = (0..cfg.pairs).map(|_| random_pair(&mut rng, cfg.dim, cfg.tol)).collect::<Result<Vec<_>>>()?;
    let diagonal = (0..cfg.pairs).map(|_| random_diagonal_pair(&mut rng, cfg.dim, cfg.tol)).collect::<Result<Vec<_>>>()?;
    let hermitian = (0..cfg.pairs)
        .map(|_| {
            let d = rng.random_range(2..=4);
            (random_hermitian(&mut rng, d), random_hermitian(&mut rng, d))
        })
        .collect();
    let triples = (0..cfg.pairs.max(1) * 5).map(|_| random_convexity_triple(&mut rng, 3)).collect();
    let unitaries = (0..cfg.pairs).map(|_| random_unitary(&mut rng, cfg.dim)).collect();
    Ok(Inputs { pairs, diagonal, hermitian, triples, unitaries })
}

fn relative_gap(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(1e-300)
}

fn operator_checks(checks: &mut Checks, a: &HermitianOperator, b: &HermitianOperator, tol: &ToleranceConfig) {
    let dec = eigendecompose(a, tol);
    let norm = a.spectral_norm().max(f64::MIN_POSITIVE);
    checks.record("spectral-round-trip", dec.reconstruct().max_abs_diff(a) / norm);
    let projections = dec.projections();
    let d = a.dim();
    let mut sum = DMatrix::<C64>::zeros(d, d);
    let mut worst = 0.0_f64;
    for (i, p) in projections.iter().enumerate() {
        let pm = p.matrix();
        worst = worst.max((pm * pm - pm).norm());
        for q in &projections[i + 1..] {
            worst = worst.max((pm * q.matrix()).norm());
        }
        sum += pm;
    }
    worst = worst.max((sum - DMatrix::<C64>::identity(d, d)).norm());
    checks.record("projection-invariants", worst);

    let pinched = dec.pinch(b).expect("same dimension");
    let scale = (a.spectral_norm() * b.spectral_norm()).max(f64::MIN_POSITIVE);
    checks.record("pinching-commutation", pinched.commutator_norm(a) / scale);
    // C = I + A + A^2 / 2 commutes with A.
    let a2 = HermitianOperator::from_matrix_unchecked(a.matrix() * a.matrix());
    let c = HermitianOperator::identity(d).add(a).and_then(|x| x.add(&a2.scale(0.5))).expect("same dimension");
    let gap = b.trace_product(&c).expect("same dimension") - pinched.trace_product(&c).expect("same dimension");
    checks.record("pinching-trace-identity", gap.abs());
}

fn convexity_checks(
    checks: &mut Checks,
    triple: &(HermitianOperator, crate::operator::ComplexMatrix, crate::operator::ComplexMatrix),
    tol: &ToleranceConfig,
) {
    let (a, x, y) = triple;
    let diff = x.as_matrix() - y.as_matrix();
    let quad = HermitianOperator::from_matrix_unchecked(diff.adjoint() * a.matrix() * &diff);
    for t in [0.0, 0.3, 0.5, 0.8, 1.0] {
        match operator_convexity_gap(a, x, y, t, tol) {
            Ok(gap) => {
                checks.record("convexity-residual", min_eigenvalue(&gap, tol));
                checks.record("convexity-closed-form", gap.max_abs_diff(&quad.scale(t * (1.0 - t))));
            }
            Err(e) => checks.record_result("convexity-residual", Err(e)),
        }
    }
}

fn exponent_checks(checks: &mut Checks, pair: &HypothesisPair, unitary: &DMatrix<C64>) -> Result<()> {
    let d = relative_entropy(pair)?;
    checks.record("relative-entropy-nonnegative", d);
    let profile = PsiBarProfile::new(pair, OptimizerConfig::default())?;
    for s in range_grid(0.0, 1.0, 0.05)? {
        checks.record("psi-order", psi_bar(pair, s)? - psi(pair, s)?);
    }
    let a_grid = range_grid(-1.0, d + 0.5, (d + 1.5) / 20.0)?;
    let phis = a_grid.iter().map(|&a| Ok(profile.phi_bar(a)?.value)).collect::<Result<Vec<_>>>()?;
    for (&a, &v) in a_grid.iter().zip(&phis) {
        checks.record("phi-order", v - phi(pair, a)?.value);
    }
    for w in a_grid.windows(2).zip(phis.windows(2)) {
        let (a, v) = w;
        let mid = profile.phi_bar(0.5 * (a[0] + a[1]))?.value;
        checks.record("phi-bar-midpoint-convexity", mid - 0.5 * (v[0] + v[1]));
        checks.record("phi-bar-monotone", v[1] - v[0]);
    }
    checks.record("phi-bar-zero-beyond-divergence", profile.phi_bar(d + 1.0)?.value);
    checks.record("phi-bar-unbounded-below", profile.phi_bar(-1e3)?.value);
    for frac in [0.0, 0.5, 0.9, 0.99] {
        checks.record("phi-bar-positive-below-divergence", profile.phi_bar(frac * d)?.value);
    }

    let h = 1e-5;
    for s in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let der = psi_derivatives(pair, s)?;
        let fd_first = (psi(pair, s + h)? - psi(pair, s - h)?) / (2.0 * h);
        checks.record("psi-prime-finite-difference", relative_gap(fd_first, der.first));
        let fd_second = (psi_derivatives(pair, s + h)?.first - psi_derivatives(pair, s - h)?.first) / (2.0 * h);
        checks.record("psi-second-finite-difference", relative_gap(fd_second, der.second));
    }
    checks.record("psi-prime-at-zero", (psi_derivatives(pair, 0.0)?.first - d).abs());
    for s in range_grid(0.05, 0.95, 0.05)? {
        checks.record("psi-second-negative", psi_derivatives(pair, s)?.second);
    }

    for r in [0.01, 0.1, 0.5] {
        let a_r = profile.solve_rate_parameter(r);
        let u = profile.hoeffding_rate(r).map(|m| m.value);
        match (a_r, u) {
            (Ok(a_r), Ok(u)) => {
                checks.record("hoeffding-two-routes", (u - (r + a_r)).abs());
                checks.record_result("rate-parameter-consistency", profile.phi_bar(a_r).map(|m| (m.value - r).abs()));
            }
            (Err(e), _) | (_, Err(e)) => checks.record_result("hoeffding-two-routes", Err(e)),
        }
    }

    let rotated = pair.conjugated(unitary)?;
    let rotated_profile = PsiBarProfile::new(&rotated, OptimizerConfig::default())?;
    let a = 0.5 * d;
    let diffs = [
        psi_bar(pair, 0.5)? - psi_bar(&rotated, 0.5)?,
        psi(pair, 0.5)? - psi(&rotated, 0.5)?,
        profile.phi_bar(a)?.value - rotated_profile.phi_bar(a)?.value,
        phi(pair, a)?.value - phi(&rotated, a)?.value,
        profile.hoeffding_rate(0.1)?.value - rotated_profile.hoeffding_rate(0.1)?.value,
    ];
    for x in diffs {
        checks.record("unitary-invariance", x.abs());
    }
    Ok(())
}

fn finite_n_checks(checks: &mut Checks, pair: &HypothesisPair, n_max: usize) -> Result<()> {
    let tol = pair.tol();
    let d = relative_entropy(pair)?;
    let fractions = [0.25, 0.5, 0.75, 0.9];
    let a_grid: Vec<f64> = fractions.iter().map(|f| f * d).collect();
    let ns: Vec<usize> = (1..=n_max).collect();
    for r in verify_bounds(pair, &ns, &a_grid)? {
        checks.record("alpha-bound", r.alpha - r.alpha_bound - crate::finite_n::bounds::BOUND_SLACK);
        checks.record("beta-bound", r.beta - r.beta_bound - crate::finite_n::bounds::BOUND_SLACK);
        checks.record("key-inequality", r.key_residual);
        checks.record("type-counting", r.v_sigma_n as f64 - r.type_bound as f64);
        let dim = pair.dim() as f64;
        if fractions.last().map(|f| f * d) == Some(r.a) {
            let bound = -r.a + dim / r.n as f64 * (r.n as f64 + 1.0).ln();
            checks.record("stein-beta-rate", r.beta.ln() / r.n as f64 - bound);
        }
    }
    let nondegenerate = pair.sigma_spectrum().v() == pair.dim();
    for &n in &ns {
        let ctx = FiniteNContext::new(pair, n)?;
        if pair.dim() == 2 && nondegenerate {
            checks.record("nondegenerate-type-count", (ctx.v_sigma_n() as f64 - (n as f64 + 1.0)).abs());
        }
        if n <= 3 {
            for s in [0.25, 0.5, 1.0] {
                checks.record_result(
                    "monotonicity-consequence",
                    monotonicity_residual(ctx.rho_n(), ctx.sigma_n_spectrum(), s, tol),
                );
            }
        }
        let sweep: Vec<f64> = range_grid(-0.5, d + 0.5, (d + 1.0) / 12.0)?;
        let mut previous: Option<(f64, f64)> = None;
        for &a in &sweep {
            let test = ctx.pinched_test(a);
            checks.record("test-idempotent", test.idempotency_defect());
            checks.record("test-commutes-with-sigma", test.operator.commutator_norm(ctx.sigma_n()));
            let e = ctx.errors(&test)?;
            checks.record("probability-mass", (e.alpha + ctx.acceptance_mass(&test)? - 1.0).abs());
            let plain = ctx.plain_test(a);
            let ep = ctx.errors(&plain)?;
            checks.record("probability-mass", (ep.alpha + ctx.acceptance_mass(&plain)? - 1.0).abs());
            let e = ctx.pinched_errors(a)?;
            if let Some((alpha, beta)) = previous {
                checks.record("alpha-monotone-in-a", alpha - e.alpha);
                checks.record("beta-monotone-in-a", e.beta - beta);
            }
            previous = Some((e.alpha, e.beta));
        }
    }
    Ok(())
}

fn commuting_checks(checks: &mut Checks, pair: &HypothesisPair, n_max: usize) -> Result<()> {
    for s in range_grid(0.0, 1.0, 0.05)? {
        checks.record("commuting-psi-equality", (psi_bar(pair, s)? - psi(pair, s)?).abs());
    }
    let diag = |m: &HermitianOperator| ClassicalDistribution::new((0..m.dim()).map(|i| m.matrix()[(i, i)].re).collect());
    let (p, q) = (diag(pair.rho())?, diag(pair.sigma())?);
    let profile = PsiBarProfile::new(pair, OptimizerConfig::default())?;
    for r in [0.01, 0.05, 0.1, 0.3] {
        let quantum = profile.hoeffding_rate(r).map(|m| m.value);
        let classical = classical_hoeffding(&p, &q, r);
        checks.record_result("commuting-hoeffding", quantum.and_then(|x| classical.map(|y| (x - y).abs())));
    }
    let d = relative_entropy(pair)?;
    for n in 1..=n_max.min(3) {
        let ctx = FiniteNContext::new(pair, n)?;
        for frac in [-0.5, 0.25, 0.5, 0.9] {
            let a = frac * d;
            checks.record("pinched-equals-plain-commuting", ctx.pinched_test(a).operator.max_abs_diff(&ctx.plain_test(a).operator));
        }
    }
    Ok(())
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.tol.validate()?;
    let inputs = draw_inputs(cfg)?;
    let tol = cfg.tol;
    let per_pair = (0..cfg.pairs)
        .into_par_iter()
        .map(|k| {
            let mut checks = Checks::new();
            let (a, b) = &inputs.hermitian[k];
            operator_checks(&mut checks, a, b, &tol);
            for t in inputs.triples.iter().skip(5 * k).take(5) {
                convexity_checks(&mut checks, t, &tol);
            }
            if let Err(e) = exponent_checks(&mut checks, &inputs.pairs[k], &inputs.unitaries[k]) {
                checks.record_result("psi-order", Err(e));
            }
            if let Err(e) = finite_n_checks(&mut checks, &inputs.pairs[k], cfg.n_max) {
                checks.record_result("alpha-bound", Err(e));
            }
            if let Err(e) = commuting_checks(&mut checks, &inputs.diagonal[k], cfg.n_max) {
                checks.record_result("commuting-psi-equality", Err(e));
            }
            checks
        })
        .collect::<Vec<_>>();
    let merged = per_pair.into_iter().fold(Checks::new(), Checks::merge);
    Ok(SuiteReport { checks: merged.0 })
}
