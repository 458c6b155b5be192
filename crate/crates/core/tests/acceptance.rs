//! Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

use qht::exponents::{
    classical_hoeffding, phi, psi, psi_bar, psi_derivatives, relative_entropy, ClassicalDistribution, HypothesisPair,
    OptimizerConfig, PsiBarProfile,
};
use qht::finite_n::{conjecture_probe, stein_trace, FiniteNContext, EXPERIMENTAL_BANNER};
use qht::operator::{
    eigendecompose, operator_convexity_gap, HermitianOperator, ToleranceConfig, C64,
};
use qht::presets::Preset;
use qht::sampling::{
    random_convexity_triple, random_diagonal_pair, random_hermitian, random_pair, random_unitary, seeded_rng,
};

type Outcome = Result<String, String>;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

/// Smallest eigenvalue from nalgebra's Hermitian solver.
fn oracle_min_eigenvalue(m: &DMatrix<C64>) -> f64 {
    let sym = (m + m.adjoint()).scale(0.5);
    SymmetricEigen::new(sym).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

fn diagonal_of(m: &HermitianOperator) -> ClassicalDistribution {
    ClassicalDistribution::new((0..m.dim()).map(|i| m.matrix()[(i, i)].re).collect()).unwrap()
}

fn s_grid(step: f64) -> Vec<f64> {
    let n = (1.0 / step).round() as usize;
    (0..=n).map(|k| k as f64 / n as f64).collect()
}

/// Seeded full-rank qubit pairs with `[rho, sigma]` clearly nonzero.
fn noncommuting_qubit_pairs(seed: u64, count: usize) -> Vec<HypothesisPair> {
    let mut rng = seeded_rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = random_pair(&mut rng, 2, tol()).unwrap();
        if p.rho().commutator_norm(p.sigma()) > 1e-6 {
            out.push(p);
        }
    }
    out
}

fn worst(acc: &mut f64, x: f64) {
    if x.is_nan() || x > *acc {
        *acc = if x.is_nan() { f64::NAN } else { x };
    }
}

fn criterion_1() -> Outcome {
    let mut rng = seeded_rng(101);
    let s = s_grid(0.05);
    let (mut psi_gap, mut u_gap) = (0.0_f64, 0.0_f64);
    for _ in 0..10 {
        let d = rng.random_range(2..=4);
        let pair = random_diagonal_pair(&mut rng, d, tol()).unwrap();
        for &x in &s {
            worst(&mut psi_gap, (psi_bar(&pair, x).unwrap() - psi(&pair, x).unwrap()).abs());
        }
        let profile = PsiBarProfile::new(&pair, OptimizerConfig::default()).unwrap();
        let (p, q) = (diagonal_of(pair.rho()), diagonal_of(pair.sigma()));
        for r in [0.01, 0.05, 0.1, 0.3] {
            let quantum = profile.hoeffding_rate(r).map_err(|e| e.to_string())?.value;
            let classical = classical_hoeffding(&p, &q, r).map_err(|e| e.to_string())?;
            worst(&mut u_gap, (quantum - classical).abs());
        }
    }
    let msg = format!("max |psi_bar - psi| = {psi_gap:.2e} (<= 1e-10), max |u_bar - classical| = {u_gap:.2e} (<= 1e-9)");
    if psi_gap <= 1e-10 && u_gap <= 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_2() -> Outcome {
    let (mut psi_excess, mut phi_excess) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let s = s_grid(0.01);
    for pair in noncommuting_qubit_pairs(202, 20) {
        for &x in &s {
            worst(&mut psi_excess, psi_bar(&pair, x).unwrap() - psi(&pair, x).unwrap());
        }
        let d = relative_entropy(&pair).unwrap();
        let profile = PsiBarProfile::new(&pair, OptimizerConfig::default()).unwrap();
        for k in 0..=100 {
            let a = -1.0 + (d + 2.0) * k as f64 / 100.0;
            worst(&mut phi_excess, profile.phi_bar(a).unwrap().value - phi(&pair, a).unwrap().value);
        }
    }
    let msg = format!("max (psi_bar - psi) = {psi_excess:.2e}, max (phi_bar - phi) = {phi_excess:.2e} (<= 1e-9)");
    if psi_excess <= 1e-9 && phi_excess <= 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_3(pairs: &[HypothesisPair]) -> Outcome {
    let mut cases = 0;
    let mut failures = Vec::new();
    let (mut alpha_slack, mut beta_slack) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (k, pair) in pairs.iter().enumerate() {
        let d = relative_entropy(pair).unwrap();
        let profile = PsiBarProfile::new(pair, OptimizerConfig::default()).unwrap();
        for n in 1..=6 {
            let ctx = FiniteNContext::new(pair, n).unwrap();
            let count = ((n + 1) * (n + 1)) as f64;
            for frac in [0.25, 0.5, 0.75, 0.9] {
                let a = frac * d;
                let phi_bar = profile.phi_bar(a).unwrap().value;
                let nf = n as f64;
                let alpha_bound = count * (-nf * phi_bar).exp();
                let beta_bound = count * (-nf * (phi_bar + a)).exp();
                let exact = ctx.pinched_errors(a).map_err(|e| e.to_string())?;
                let dense = ctx.errors(&ctx.pinched_test(a)).map_err(|e| e.to_string())?;
                for e in [exact, dense] {
                    cases += 1;
                    worst(&mut alpha_slack, e.alpha - alpha_bound);
                    worst(&mut beta_slack, e.beta - beta_bound);
                    if !(e.alpha <= alpha_bound + 1e-12 && e.beta <= beta_bound + 1e-12) {
                        failures.push(format!("pair {k} n {n} a {frac}D"));
                    }
                }
            }
        }
    }
    let msg = format!(
        "{cases} cases; max (alpha - bound) = {alpha_slack:.2e}, max (beta - bound) = {beta_slack:.2e} (<= 1e-12)"
    );
    if failures.is_empty() {
        Ok(msg)
    } else {
        Err(format!("{msg}; failing: {}", failures.join(", ")))
    }
}

fn criterion_4(pairs: &[HypothesisPair]) -> Outcome {
    let mut min_residual = f64::INFINITY;
    let mut problems = Vec::new();
    for (k, pair) in pairs.iter().enumerate() {
        // Distinct eigenvalues of sigma from nalgebra; a qubit sigma is
        // nondegenerate when they differ beyond rounding.
        let eig = SymmetricEigen::new(pair.sigma().matrix().clone()).eigenvalues;
        let nondegenerate = (eig[0] - eig[1]).abs() > 1e-8;
        for n in 1..=4 {
            let ctx = FiniteNContext::new(pair, n).unwrap();
            let v = ctx.v_sigma_n();
            let residual = ctx.rho_bar().scale(v as f64).sub(ctx.rho_n()).unwrap();
            min_residual = min_residual.min(oracle_min_eigenvalue(residual.matrix()));
            if v > (n + 1) * (n + 1) {
                problems.push(format!("pair {k} n {n}: v = {v} > (n+1)^2"));
            }
            if nondegenerate && v != n + 1 {
                problems.push(format!("pair {k} n {n}: v = {v} != n + 1"));
            }
        }
    }
    let msg = format!("min eig(v rho_bar - rho_n) = {min_residual:.2e} (>= -1e-9); v(sigma_n) = n + 1 on nondegenerate sigma");
    if min_residual >= -1e-9 && problems.is_empty() {
        Ok(msg)
    } else {
        Err(format!("{msg}; {}", problems.join(", ")))
    }
}

fn criterion_5() -> Outcome {
    let h = 1e-5;
    let (mut first_rel, mut second_rel, mut at_zero, mut max_second) =
        (0.0_f64, 0.0_f64, 0.0_f64, f64::NEG_INFINITY);
    for pair in noncommuting_qubit_pairs(505, 10) {
        for s in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let der = psi_derivatives(&pair, s).unwrap();
            let fd1 = (psi(&pair, s + h).unwrap() - psi(&pair, s - h).unwrap()) / (2.0 * h);
            let fd2 = (psi_derivatives(&pair, s + h).unwrap().first - psi_derivatives(&pair, s - h).unwrap().first)
                / (2.0 * h);
            worst(&mut first_rel, (fd1 - der.first).abs() / der.first.abs());
            worst(&mut second_rel, (fd2 - der.second).abs() / der.second.abs());
        }
        let d = relative_entropy(&pair).unwrap();
        worst(&mut at_zero, (psi_derivatives(&pair, 0.0).unwrap().first - d).abs());
        for s in s_grid(0.05) {
            worst(&mut max_second, psi_derivatives(&pair, s).unwrap().second);
        }
    }
    let msg = format!(
        "rel err psi' = {first_rel:.2e}, psi'' = {second_rel:.2e} (<= 1e-6); |psi'(0) - D| = {at_zero:.2e} (<= 1e-8); max psi'' = {max_second:.2e} (< 0)"
    );
    if first_rel <= 1e-6 && second_rel <= 1e-6 && at_zero <= 1e-8 && max_second < 0.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_6() -> Outcome {
    let (mut level, mut route) = (0.0_f64, 0.0_f64);
    for pair in noncommuting_qubit_pairs(606, 10) {
        let profile = PsiBarProfile::new(&pair, OptimizerConfig::default()).unwrap();
        for r in [0.01, 0.1, 0.5] {
            let a_r = profile.solve_rate_parameter(r).map_err(|e| e.to_string())?;
            let u = profile.hoeffding_rate(r).map_err(|e| e.to_string())?.value;
            worst(&mut level, (profile.phi_bar(a_r).unwrap().value - r).abs());
            worst(&mut route, (u - (r + a_r)).abs());
        }
    }
    let msg = format!("max |phi_bar(a_r) - r| = {level:.2e} (<= 1e-8), max |u_bar - (r + a_r)| = {route:.2e} (<= 1e-7)");
    if level <= 1e-8 && route <= 1e-7 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_7() -> Outcome {
    let pair = Preset::QubitGeneric.pair(tol()).unwrap();
    if pair.rho().commutator_norm(pair.sigma()) <= 1e-12 {
        return Err("preset commutes".into());
    }
    let d = relative_entropy(&pair).unwrap();
    let a = 0.9 * d;
    let trace = stein_trace(&pair, a, 8).map_err(|e| e.to_string())?;
    let mut problems = Vec::new();
    for p in &trace {
        let n = p.errors.n as f64;
        if !(p.errors.alpha <= p.alpha_bound) {
            problems.push(format!("n {}: alpha {:.3e} > envelope {:.3e}", p.errors.n, p.errors.alpha, p.alpha_bound));
        }
        let rate = p.errors.beta.ln() / n;
        let limit = -a + 2.0 / n * (n + 1.0).ln();
        if !(rate <= limit) {
            problems.push(format!("n {}: beta rate {rate:.4} > {limit:.4}", p.errors.n));
        }
    }
    let ratio = trace[7].alpha_bound / trace[0].alpha_bound;
    if !(ratio < 0.5) {
        problems.push(format!("envelope ratio {ratio:.3} >= 0.5"));
    }
    let msg = format!("a = 0.9 D = {a:.4}; envelope(8) / envelope(1) = {ratio:.3} (< 0.5); alpha and beta rates within bounds at n <= 8");
    if problems.is_empty() {
        Ok(msg)
    } else {
        Err(format!("{msg}; {}", problems.join(", ")))
    }
}

/// Hermitian matrix with a repeated eigenvalue, so that pinching is not
/// just the diagonal part in a nondegenerate basis.
fn degenerate_hermitian(rng: &mut impl Rng, d: usize) -> HermitianOperator {
    let u = random_unitary(rng, d);
    let values: Vec<f64> = (0..d).map(|i| if i < 2 { 1.5 } else { -0.5 + i as f64 }).collect();
    let diag = DMatrix::from_fn(d, d, |i, j| if i == j { C64::new(values[i], 0.0) } else { C64::new(0.0, 0.0) });
    HermitianOperator::from_matrix_unchecked(&u * diag * u.adjoint())
}

fn criterion_8() -> Outcome {
    let mut rng = seeded_rng(808);
    let t_values = [0.0, 0.25, 0.5, 0.75, 1.0];
    let (mut min_residual, mut closed_form) = (f64::INFINITY, 0.0_f64);
    for _ in 0..100 {
        let (a, x, y) = random_convexity_triple(&mut rng, 3);
        let diff = x.as_matrix() - y.as_matrix();
        let quadratic = diff.adjoint() * a.matrix() * &diff;
        for t in t_values {
            let gap = operator_convexity_gap(&a, &x, &y, t, &tol()).map_err(|e| e.to_string())?;
            min_residual = min_residual.min(oracle_min_eigenvalue(gap.matrix()));
            let expected = quadratic.scale(t * (1.0 - t));
            worst(&mut closed_form, (gap.matrix() - expected).iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    let (mut commutation, mut trace_identity) = (0.0_f64, 0.0_f64);
    for k in 0..100 {
        let d = rng.random_range(2..=4);
        let a = if k % 2 == 0 { random_hermitian(&mut rng, d) } else { degenerate_hermitian(&mut rng, d) };
        let b = random_hermitian(&mut rng, d);
        let pinched = eigendecompose(&a, &tol()).pinch(&b).unwrap();
        let am = a.matrix();
        let comm = (pinched.matrix() * am - am * pinched.matrix()).norm();
        let scale = SymmetricEigen::new(am.clone()).eigenvalues.amax() * SymmetricEigen::new(b.matrix().clone()).eigenvalues.amax();
        worst(&mut commutation, comm / scale);
        // C = 0.3 I - A + 0.7 A^2 - 0.1 A^3 commutes with A.
        let id = DMatrix::<C64>::identity(d, d);
        let a2 = am * am;
        let c = id.scale(0.3) - am + a2.scale(0.7) - (&a2 * am).scale(0.1);
        let lhs = (b.matrix() * &c).trace();
        let rhs = (pinched.matrix() * &c).trace();
        worst(&mut trace_identity, (lhs - rhs).norm());
    }
    let msg = format!(
        "convexity min eig = {min_residual:.2e} (>= -1e-10), closed form gap = {closed_form:.2e} (<= 1e-10); pinching commutation = {commutation:.2e}, trace identity = {trace_identity:.2e} (<= 1e-9)"
    );
    if min_residual >= -1e-10 && closed_form <= 1e-10 && commutation <= 1e-9 && trace_identity <= 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_9() -> Outcome {
    let mut rows = 0;
    let mut pairs = vec![Preset::QubitGeneric.pair(tol()).unwrap(), Preset::Commuting1.pair(tol()).unwrap()];
    pairs.extend(noncommuting_qubit_pairs(909, 2));
    for pair in &pairs {
        let a = 0.5 * relative_entropy(pair).unwrap();
        let report = conjecture_probe(pair, &[1, 2, 3, 4, 5, 6], a).map_err(|e| e.to_string())?;
        let csv = report.to_csv();
        if !csv.starts_with(&format!("# {EXPERIMENTAL_BANNER}")) || !report.to_json().contains("EXPERIMENTAL") {
            return Err("table is not labeled EXPERIMENTAL".into());
        }
        rows += report.rows.len();
    }
    Ok(format!("{rows} rows over {} pairs at n <= 6, labeled EXPERIMENTAL; no assertion", pairs.len()))
}

fn run(id: usize, budget: Option<Duration>, check: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = check();
    let elapsed = start.elapsed();
    let over = budget.is_some_and(|b| elapsed > b);
    let budget_note = budget.map(|b| format!(" (budget {} s)", b.as_secs())).unwrap_or_default();
    let (status, detail) = match (&outcome, over) {
        (Ok(m), false) => ("PASS", m.clone()),
        (Ok(m), true) => ("FAIL", format!("{m}; over time budget")),
        (Err(m), _) => ("FAIL", m.clone()),
    };
    println!("criterion {id}: {status} [{:.2} s{budget_note}] {detail}", elapsed.as_secs_f64());
    status == "PASS"
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let finite_n_pairs = noncommuting_qubit_pairs(303, 10);
    let results = [
        run(1, secs(5), criterion_1),
        run(2, secs(10), criterion_2),
        run(3, secs(60), || criterion_3(&finite_n_pairs)),
        run(4, secs(30), || criterion_4(&finite_n_pairs)),
        run(5, None, criterion_5),
        run(6, None, criterion_6),
        run(7, secs(120), criterion_7),
        run(8, None, criterion_8),
        run(9, None, criterion_9),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
