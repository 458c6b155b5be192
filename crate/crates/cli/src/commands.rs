use std::fs;
use std::path::Path;
use std::process::ExitCode;

use qht::exponents::{
    psi, psi_bar, relative_entropy, sweep_curve, CurveKind, HypothesisPair, OptimizerConfig, PsiBarProfile,
};
use qht::finite_n::{bound_reports_csv, conjecture_probe, verify_bounds};
use qht::format::fmt_f64;
use qht::grid::parse_range;
use qht::operator::io::parse_pair;
use qht::operator::ToleranceConfig;
use qht::presets::Preset;
use qht::sampling::SAMPLE_SMOOTHING;
use qht::suite::{run_suite, SuiteConfig};
use qht::Error;
use serde::Serialize;

use crate::args::{Cli, Command, CurveArg, Format, OutArgs, PairArgs, TolArgs};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn report(&self) -> String {
        match self {
            CliError::Core(e) => format!("error: invariant `{}` violated: {e}", e.invariant()),
            CliError::Io(msg) => format!("error: {msg}"),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn tolerance(args: &TolArgs) -> CliResult<ToleranceConfig> {
    let mut tol = ToleranceConfig::default();
    if let Some(c) = args.tol_cluster {
        tol = tol.with_cluster_rel_tol(c);
    }
    if args.smooth || args.smoothing_delta.is_some() {
        tol = tol.with_smoothing(args.smoothing_delta.unwrap_or(SAMPLE_SMOOTHING));
    }
    tol.validate()?;
    Ok(tol)
}

pub fn load_pair(args: &PairArgs, tol: ToleranceConfig) -> CliResult<HypothesisPair> {
    match (&args.input, &args.preset) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Ok(HypothesisPair::from_json(&parse_pair(&text)?, tol)?)
        }
        (None, Some(name)) => Ok(Preset::from_name(name)?.pair(tol)?),
        (None, None) => Err(Error::Parse("one of --input or --preset is required".into()).into()),
    }
}

fn format_of(out: &OutArgs) -> Format {
    out.format.unwrap_or_else(|| match out.out.as_ref().and_then(|p| p.extension()) {
        Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
        _ => Format::Csv,
    })
}

fn emit(out: &OutArgs, text: &str) -> CliResult<()> {
    match &out.out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct ExponentRow {
    s: f64,
    psi_bar: f64,
    psi: f64,
}

#[derive(Serialize)]
struct ExponentsOutput {
    relative_entropy: f64,
    rows: Vec<ExponentRow>,
}

fn exponent_rows(pair: &HypothesisPair, grid: &[f64]) -> CliResult<Vec<ExponentRow>> {
    grid.iter()
        .map(|&s| Ok(ExponentRow { s, psi_bar: psi_bar(pair, s)?, psi: psi(pair, s)? }))
        .collect::<Result<_, Error>>()
        .map_err(Into::into)
}

fn exponent_rows_csv(rows: &[ExponentRow]) -> String {
    let mut out = String::from("s,psi_bar,psi\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", fmt_f64(r.s), fmt_f64(r.psi_bar), fmt_f64(r.psi)));
    }
    out
}

#[derive(Serialize)]
struct TransformRow {
    a: f64,
    phi_bar: f64,
    phi_bar_argmax_s: f64,
    phi: f64,
    phi_argmax_s: f64,
}

fn transform_rows(pair: &HypothesisPair, grid: &[f64]) -> CliResult<Vec<TransformRow>> {
    let phi_bar = sweep_curve(pair, CurveKind::PhiBar, grid)?;
    let phi = sweep_curve(pair, CurveKind::Phi, grid)?;
    Ok(phi_bar
        .samples
        .iter()
        .zip(&phi.samples)
        .map(|(b, p)| TransformRow {
            a: b.param,
            phi_bar: b.value,
            phi_bar_argmax_s: b.argmax_s.unwrap_or(f64::NAN),
            phi: p.value,
            phi_argmax_s: p.argmax_s.unwrap_or(f64::NAN),
        })
        .collect())
}

fn transform_rows_csv(rows: &[TransformRow]) -> String {
    let mut out = String::from("a,phi_bar,phi_bar_argmax_s,phi,phi_argmax_s\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f64(r.a),
            fmt_f64(r.phi_bar),
            fmt_f64(r.phi_bar_argmax_s),
            fmt_f64(r.phi),
            fmt_f64(r.phi_argmax_s)
        ));
    }
    out
}

#[derive(Serialize)]
struct HoeffdingRow {
    r: f64,
    u_bar: f64,
    argmax_s: f64,
    a_r: f64,
}

fn hoeffding_csv(rows: &[HoeffdingRow]) -> String {
    let mut out = String::from("r,u_bar,argmax_s,a_r\n");
    for h in rows {
        out.push_str(&format!("{},{},{},{}\n", fmt_f64(h.r), fmt_f64(h.u_bar), fmt_f64(h.argmax_s), fmt_f64(h.a_r)));
    }
    out
}

pub fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Exponents { pair, grid_s, export_pair, tol, out } => {
            let pair = load_pair(&pair, tolerance(&tol)?)?;
            let grid = parse_range(&grid_s)?;
            let d = relative_entropy(&pair)?;
            let rows = exponent_rows(&pair, &grid)?;
            if let Some(path) = export_pair {
                write_file(&path, &json(&pair.to_json()))?;
            }
            let text = match format_of(&out) {
                Format::Json => json(&ExponentsOutput { relative_entropy: d, rows }),
                Format::Csv => format!("# relative_entropy = {}\n{}", fmt_f64(d), exponent_rows_csv(&rows)),
            };
            emit(&out, &text)?;
        }
        Command::Curves { pair, grid_s, grid_a, curve, tol, out } => {
            let pair = load_pair(&pair, tolerance(&tol)?)?;
            let format = format_of(&out);
            let text = match curve {
                Some(which) => {
                    let kind = match which {
                        CurveArg::PsiBar => CurveKind::PsiBar,
                        CurveArg::Psi => CurveKind::Psi,
                        CurveArg::PhiBar => CurveKind::PhiBar,
                        CurveArg::Phi => CurveKind::Phi,
                    };
                    let spec = if matches!(which, CurveArg::PsiBar | CurveArg::Psi) { grid_s } else { grid_a };
                    let spec = spec.ok_or_else(|| {
                        Error::InvalidGrid(format!("curve {} needs its parameter grid", kind.name()))
                    })?;
                    let c = sweep_curve(&pair, kind, &parse_range(&spec)?)?;
                    match format {
                        Format::Json => format!("{}\n", c.to_json()),
                        Format::Csv => c.to_csv(),
                    }
                }
                None => match (grid_s, grid_a) {
                    (Some(_), Some(_)) => {
                        return Err(Error::InvalidGrid("give --grid-s or --grid-a, not both, without --curve".into()).into())
                    }
                    (None, Some(a)) => {
                        let rows = transform_rows(&pair, &parse_range(&a)?)?;
                        match format {
                            Format::Json => json(&rows),
                            Format::Csv => transform_rows_csv(&rows),
                        }
                    }
                    (s, None) => {
                        let grid = parse_range(s.as_deref().unwrap_or("0:1:0.01"))?;
                        let rows = exponent_rows(&pair, &grid)?;
                        match format {
                            Format::Json => json(&rows),
                            Format::Csv => exponent_rows_csv(&rows),
                        }
                    }
                },
            };
            emit(&out, &text)?;
        }
        Command::Hoeffding { pair, grid_r, tol, out } => {
            let pair = load_pair(&pair, tolerance(&tol)?)?;
            let grid = parse_range(&grid_r)?;
            let profile = PsiBarProfile::new(&pair, OptimizerConfig::default())?;
            let rows = grid
                .iter()
                .map(|&r| {
                    let m = profile.hoeffding_rate(r)?;
                    Ok(HoeffdingRow { r, u_bar: m.value, argmax_s: m.argmax, a_r: profile.solve_rate_parameter(r)? })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let text = match format_of(&out) {
                Format::Json => json(&rows),
                Format::Csv => hoeffding_csv(&rows),
            };
            emit(&out, &text)?;
        }
        Command::FiniteN { pair, n_max, grid_a, tol, out } => {
            let pair = load_pair(&pair, tolerance(&tol)?)?;
            if n_max == 0 {
                return Err(Error::ZeroBlockCount.into());
            }
            let a_grid = match grid_a {
                Some(spec) => parse_range(&spec)?,
                None => {
                    let d = relative_entropy(&pair)?;
                    [0.25, 0.5, 0.75, 0.9].iter().map(|f| f * d).collect()
                }
            };
            let ns: Vec<usize> = (1..=n_max).collect();
            let reports = verify_bounds(&pair, &ns, &a_grid)?;
            let text = match format_of(&out) {
                Format::Json => json(&reports),
                Format::Csv => bound_reports_csv(&reports),
            };
            emit(&out, &text)?;
            if !reports.iter().all(|r| r.holds()) {
                eprintln!("error: a finite-n bound failed");
                return Ok(ExitCode::from(1));
            }
        }
        Command::Verify { seed, pairs, n_max, dim, tol, out } => {
            if n_max == 0 {
                return Err(Error::ZeroBlockCount.into());
            }
            let cfg = SuiteConfig { seed, pairs, n_max, dim, tol: tolerance(&tol)? };
            let report = run_suite(&cfg)?;
            let text = match format_of(&out) {
                Format::Json => json(&report),
                Format::Csv => report.summary(),
            };
            emit(&out, &text)?;
            if !report.all_passed() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Conjecture { pair, n_max, a, a_fraction, tol, out } => {
            let pair = load_pair(&pair, tolerance(&tol)?)?;
            if n_max == 0 {
                return Err(Error::ZeroBlockCount.into());
            }
            let a = match a {
                Some(a) => a,
                None => a_fraction * relative_entropy(&pair)?,
            };
            let ns: Vec<usize> = (1..=n_max).collect();
            let report = conjecture_probe(&pair, &ns, a)?;
            let text = match format_of(&out) {
                Format::Json => format!("{}\n", report.to_json()),
                Format::Csv => report.to_csv(),
            };
            emit(&out, &text)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
