//! Command-line front end: `solve`, `verify`, `counterexample` and `sweep`,
//! writing CSV tables and sequence dumps to an output directory.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::dump::{format_f64, save_sequence, DumpHeader};
use crate::error::{Error, Result};
use crate::inequalities::appendix1_checkpoints;
use crate::lattice::{CoefficientFamily, CoefficientProfile, LatticeWindow, ProblemParams};
use crate::solver::{minimize_ground_state, minimize_sign_changing, Mode, SolveConfig, SolveResult};
use crate::verify::{run_suite, CheckRow, Suite};

/// Environment variable consulted for the default output directory.
pub const OUT_DIR_ENV: &str = "DPLAP_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "out";
pub const DEFAULT_COUNTEREXAMPLE_RADIUS: usize = 1_000_000;

pub const RESULTS_HEADER: [&str; 13] = [
    "mode", "p", "q", "r", "zeta", "N", "energy", "stationarity", "sign_changes", "iterations", "converged",
    "seed", "profile",
];
pub const COUNTEREXAMPLE_HEADER: [&str; 4] = ["N", "S_N", "norm_a_sum", "norm_b_sum"];
pub const SWEEP_HEADER: [&str; 15] = [
    "param", "value", "p", "q", "r", "zeta", "N", "c_star", "m_star", "m_minus_2c", "holds", "c_converged",
    "m_converged", "seed", "profile",
];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// `--help` or `--version` output.
    #[error("{0}")]
    Help(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("constraint error: {0}")]
    Constraint(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Help(_) => 0,
            CliError::Usage(_) | CliError::Constraint(_) => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProfileArg {
    Constant,
    #[value(alias = "polynomial")]
    Appendix1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeSelection {
    Ground,
    SignChanging,
    Both,
}

impl ModeSelection {
    pub fn modes(&self) -> &'static [Mode] {
        match self {
            ModeSelection::Ground => &[Mode::Ground],
            ModeSelection::SignChanging => &[Mode::SignChanging],
            ModeSelection::Both => &[Mode::Ground, Mode::SignChanging],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Decomposition,
    Inequalities,
    Gradient,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepAxis {
    P,
    Q,
    R,
    Zeta,
    Window,
}

impl SweepAxis {
    pub fn tag(&self) -> &'static str {
        match self {
            SweepAxis::P => "p",
            SweepAxis::Q => "q",
            SweepAxis::R => "r",
            SweepAxis::Zeta => "zeta",
            SweepAxis::Window => "window",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Estimate the ground-state and/or sign-changing levels by projected descent.
    Solve,
    /// Run randomized certificate suites.
    Verify,
    /// Partial sums of the divergent logarithmic series at decade checkpoints.
    Counterexample,
    /// Solve across a parameter range and check m* >= 2 c* at each point.
    Sweep,
}

#[derive(Debug, Parser)]
#[command(name = "dplap", version, about = "Discrete p-Laplacian with logarithmic nonlinearity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Exponent of the p-Laplacian (default 2).
    #[arg(long, global = true)]
    p: Option<f64>,
    /// Power in the nonlinearity (default 3; 2 for counterexample).
    #[arg(long, global = true)]
    q: Option<f64>,
    /// Log exponent, at least 1 (default 1).
    #[arg(long, global = true)]
    r: Option<f64>,
    /// Growth exponent of the log bound (default q + 1).
    #[arg(long, global = true)]
    zeta: Option<f64>,
    /// Window radius N (sites -N..N).
    #[arg(long, global = true)]
    window: Option<usize>,
    #[arg(long, global = true, value_enum)]
    profile: Option<ProfileArg>,
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeSelection>,
    /// Projection tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long = "tol-grad", global = true)]
    tol_grad: Option<f64>,
    #[arg(long = "max-iter", global = true)]
    max_iter: Option<usize>,
    #[arg(long, global = true)]
    starts: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long = "out-dir", global = true)]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    suite: Option<SuiteArg>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Sweep axis.
    #[arg(long, global = true, value_enum)]
    param: Option<SweepAxis>,
    #[arg(long, global = true)]
    from: Option<f64>,
    #[arg(long, global = true)]
    to: Option<f64>,
    #[arg(long, global = true)]
    step: Option<f64>,
    /// Tab-separated "n a b c" overrides on top of the profile family.
    #[arg(long = "coeff-file", global = true)]
    coeff_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub axis: SweepAxis,
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

impl SweepRange {
    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = 0u32;
        loop {
            let v = self.from + f64::from(k) * self.step;
            if v > self.to + 1e-9 * self.step {
                break;
            }
            out.push(v);
            k += 1;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: ProblemParams,
    /// Whether `--zeta` was given; otherwise sweeps keep `zeta = q + 1`.
    pub zeta_explicit: bool,
    pub profile: CoefficientFamily,
    pub coeff_file: Option<PathBuf>,
    pub modes: ModeSelection,
    pub solve: SolveConfig,
    pub out_dir: PathBuf,
    pub suite: Suite,
    pub samples: usize,
    pub sweep: Option<SweepRange>,
}

fn usage(flag: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{flag}: {msg}"))
}

fn positive(flag: &str, v: f64) -> std::result::Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(usage(flag, format!("must be positive, got {v}")))
    }
}

/// Parses `argv` (including the program name) into a validated configuration.
pub fn parse_config<I, T>(argv: I) -> std::result::Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => CliError::Help(e.to_string()),
        _ => CliError::Usage(e.to_string().trim_end().to_string()),
    })?;
    let command = cli.command;
    let counterexample = command == Command::Counterexample;

    let p = cli.p.unwrap_or(2.0);
    let q = cli.q.unwrap_or(if counterexample { 2.0 } else { 3.0 });
    let r = cli.r.unwrap_or(1.0);
    let zeta = cli.zeta.unwrap_or(q + 1.0);
    let radius = cli.window.unwrap_or(if counterexample { DEFAULT_COUNTEREXAMPLE_RADIUS } else { 64 });
    if radius < 1 {
        return Err(usage("--window", "must be at least 1"));
    }

    let params = if counterexample {
        let params = ProblemParams::new_unordered(p, q, r, zeta).map_err(|e| CliError::Constraint(e.to_string()))?;
        if !(q > 1.0 && q <= 2.0) {
            return Err(CliError::Constraint(format!("counterexample needs 1 < q <= 2, got q = {q}")));
        }
        let first = (p + 2.0).ceil() as usize;
        if radius < first {
            return Err(CliError::Constraint(format!("counterexample needs --window >= {first}")));
        }
        params
    } else {
        ProblemParams::new(p, q, r, zeta).map_err(|e| CliError::Constraint(e.to_string()))?
    };

    let suite = match cli.suite.unwrap_or(SuiteArg::All) {
        SuiteArg::Decomposition => Suite::Decomposition,
        SuiteArg::Inequalities => Suite::Inequalities,
        SuiteArg::Gradient => Suite::Gradient,
        SuiteArg::All => Suite::All,
    };
    if command == Command::Verify && suite == Suite::Decomposition && !params.even_p() {
        return Err(CliError::Constraint(format!("decomposition suite needs an even integer p, got p = {p}")));
    }

    let mut solve = SolveConfig::new(radius);
    if let Some(v) = cli.tol {
        solve.tol_proj = positive("--tol", v)?;
    }
    if let Some(v) = cli.tol_grad {
        solve.tol_grad = positive("--tol-grad", v)?;
    }
    if let Some(v) = cli.max_iter {
        if v == 0 {
            return Err(usage("--max-iter", "must be at least 1"));
        }
        solve.max_iter = v;
    }
    if let Some(v) = cli.starts {
        if v == 0 {
            return Err(usage("--starts", "must be at least 1"));
        }
        solve.starts = v;
    }
    solve.seed = cli.seed.unwrap_or(0);

    let samples = cli.samples.unwrap_or(1000);
    if samples == 0 {
        return Err(usage("--samples", "must be at least 1"));
    }

    let sweep = if command == Command::Sweep {
        let axis = cli.param.ok_or_else(|| usage("--param", "required for sweep"))?;
        let from = cli.from.ok_or_else(|| usage("--from", "required for sweep"))?;
        let to = cli.to.ok_or_else(|| usage("--to", "required for sweep"))?;
        let step = positive("--step", cli.step.ok_or_else(|| usage("--step", "required for sweep"))?)?;
        if to < from {
            return Err(usage("--to", format!("must not be below --from ({to} < {from})")));
        }
        let range = SweepRange { axis, from, to, step };
        for v in range.values() {
            sweep_point(&params, radius, cli.zeta.is_some(), axis, v)?;
        }
        Some(range)
    } else {
        None
    };

    let out_dir = cli
        .out_dir
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));

    Ok(RunConfig {
        command,
        params,
        zeta_explicit: cli.zeta.is_some(),
        profile: match cli.profile.unwrap_or(ProfileArg::Constant) {
            ProfileArg::Constant => CoefficientFamily::Constant,
            ProfileArg::Appendix1 => CoefficientFamily::Appendix1,
        },
        coeff_file: cli.coeff_file,
        modes: cli.mode.unwrap_or(ModeSelection::Both),
        solve,
        out_dir,
        suite,
        samples,
        sweep,
    })
}

/// Parameters and window at one sweep value.
fn sweep_point(
    base: &ProblemParams,
    radius: usize,
    zeta_explicit: bool,
    axis: SweepAxis,
    v: f64,
) -> std::result::Result<(ProblemParams, usize), CliError> {
    let (mut p, mut q, mut r, mut zeta) = (base.p, base.q, base.r, base.zeta);
    let mut n = radius;
    match axis {
        SweepAxis::P => p = v,
        SweepAxis::Q => q = v,
        SweepAxis::R => r = v,
        SweepAxis::Zeta => zeta = v,
        SweepAxis::Window => {
            if v < 1.0 || v.fract() != 0.0 {
                return Err(usage("--param window", format!("values must be positive integers, got {v}")));
            }
            n = v as usize;
        }
    }
    if !zeta_explicit && axis != SweepAxis::Zeta {
        zeta = q + 1.0;
    }
    let params = ProblemParams::new(p, q, r, zeta)
        .map_err(|e| CliError::Constraint(format!("sweep {} = {v}: {e}", axis.tag())))?;
    Ok((params, n))
}

/// Reads tab-separated `n a b c` lines; `#` starts a comment.
pub fn load_coefficient_overrides(path: &Path) -> Result<Vec<(i64, f64, f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let bad = |msg: String| Error::Parse { path: path.to_path_buf(), line, msg };
        if record.len() != 4 {
            return Err(bad(format!("expected 4 tab-separated fields, got {}", record.len())));
        }
        let n: i64 = record[0].parse().map_err(|_| bad(format!("bad site index {:?}", &record[0])))?;
        let mut w = [0.0; 3];
        for (k, slot) in w.iter_mut().enumerate() {
            *slot = record[k + 1].parse().map_err(|_| bad(format!("bad coefficient {:?}", &record[k + 1])))?;
        }
        out.push((n, w[0], w[1], w[2]));
    }
    Ok(out)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse { path: path.to_path_buf(), line, msg: format!("{other:?}") },
    }
}

/// The coefficient profile selected by the configuration on radius `radius`.
pub fn build_coefficients(config: &RunConfig, params: &ProblemParams, radius: usize) -> Result<CoefficientProfile> {
    let window = LatticeWindow::new(radius)?;
    let base = match config.profile {
        CoefficientFamily::Appendix1 => CoefficientProfile::appendix1(window, params),
        _ => CoefficientProfile::unit(window),
    };
    match &config.coeff_file {
        Some(path) => base.with_overrides(&load_coefficient_overrides(path)?),
        None => Ok(base),
    }
}

fn write_csv<const K: usize>(path: &Path, header: [&str; K], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record(header).map_err(|e| csv_error(path, e))?;
    for row in rows {
        w.write_record(row).map_err(|e| csv_error(path, e))?;
    }
    w.flush()?;
    Ok(())
}

pub fn result_record(res: &SolveResult, params: &ProblemParams, seed: u64, profile: &str) -> Vec<String> {
    vec![
        res.mode.tag().to_string(),
        format_f64(params.p),
        format_f64(params.q),
        format_f64(params.r),
        format_f64(params.zeta),
        res.minimizer.radius().to_string(),
        format_f64(res.energy),
        format_f64(res.stationarity),
        res.sign_changes.to_string(),
        res.iterations.to_string(),
        res.converged.to_string(),
        seed.to_string(),
        profile.to_string(),
    ]
}

fn solve_mode(coeff: &CoefficientProfile, params: &ProblemParams, config: &SolveConfig, mode: Mode) -> Result<SolveResult> {
    match mode {
        Mode::Ground => minimize_ground_state(coeff, params, config),
        Mode::SignChanging => minimize_sign_changing(coeff, params, config),
    }
}

fn report_failure(what: &str, e: &Error) {
    eprintln!("{what}: {e}");
    if let Error::NoConvergedStart { diagnostics, .. } = e {
        for d in diagnostics {
            eprintln!("  {d}");
        }
    }
}

fn run_solve(config: &RunConfig) -> Result<bool> {
    let params = config.params;
    let coeff = build_coefficients(config, &params, config.solve.radius)?;
    let profile = coeff.family().tag();
    let mut rows = Vec::new();
    let mut ok = true;
    let mut levels = Vec::new();
    for &mode in config.modes.modes() {
        match solve_mode(&coeff, &params, &config.solve, mode) {
            Ok(res) => {
                println!(
                    "{}: energy={} stationarity={:e} sign_changes={} iterations={} start={}",
                    mode, res.energy, res.stationarity, res.sign_changes, res.iterations, res.start
                );
                let header = DumpHeader { radius: config.solve.radius, params, profile: profile.to_string(), point: None };
                save_sequence(&config.out_dir.join(format!("{}.seq", mode.tag())), &res.minimizer, &header)?;
                rows.push(result_record(&res, &params, config.solve.seed, profile));
                levels.push((mode, res.energy));
            }
            Err(e @ Error::NoConvergedStart { .. }) => {
                report_failure(mode.tag(), &e);
                ok = false;
            }
            Err(e) => return Err(e),
        }
    }
    write_csv(&config.out_dir.join("results.csv"), RESULTS_HEADER, &rows)?;
    if let [(Mode::Ground, c), (Mode::SignChanging, m)] = levels[..] {
        let holds = m >= 2.0 * c - 1e-8 * m.abs();
        println!("m* - 2c* = {:e} ({})", m - 2.0 * c, if holds { "holds" } else { "VIOLATED" });
        ok &= holds;
    }
    Ok(ok)
}

fn run_verify(config: &RunConfig) -> Result<bool> {
    let rows = run_suite(config.suite, &config.params, config.samples, config.solve.seed)?;
    let records: Vec<Vec<String>> = rows.iter().map(|r| r.csv_record().to_vec()).collect();
    write_csv(&config.out_dir.join("verify.csv"), CheckRow::CSV_HEADER, &records)?;
    for r in &rows {
        println!(
            "{}: samples={} min_slack={:e} tolerance={:e} {}",
            r.check,
            r.samples,
            r.min_slack,
            r.tolerance,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    Ok(rows.iter().all(|r| r.pass))
}

/// Decade checkpoints `10, 100, ...` up to `radius`, plus `radius` itself.
pub fn decade_checkpoints(radius: usize, first: usize) -> Vec<usize> {
    let mut out: Vec<usize> = std::iter::successors(Some(10usize), |&n| n.checked_mul(10))
        .take_while(|&n| n <= radius)
        .filter(|&n| n >= first)
        .collect();
    if out.last() != Some(&radius) {
        out.push(radius);
    }
    out
}

fn run_counterexample(config: &RunConfig) -> Result<bool> {
    let params = config.params;
    let first = (params.p + 2.0).ceil() as usize;
    let sums = appendix1_checkpoints(&params, &decade_checkpoints(config.solve.radius, first))?;
    let rows: Vec<Vec<String>> = sums
        .iter()
        .map(|s| {
            vec![s.radius.to_string(), format_f64(s.log_sum), format_f64(s.difference_sum), format_f64(s.mass_sum)]
        })
        .collect();
    write_csv(&config.out_dir.join("counterexample.csv"), COUNTEREXAMPLE_HEADER, &rows)?;
    let decreasing = sums.windows(2).all(|w| w[1].log_sum < w[0].log_sum);
    let last = sums.last().expect("at least one checkpoint");
    println!("S_N at N={}: {} (strictly decreasing: {decreasing})", last.radius, last.log_sum);
    if let [.., a, b] = &sums[..] {
        println!(
            "norm partial sums change from N={} to N={}: a-sum {:e}, b-sum {:e}",
            a.radius,
            b.radius,
            (b.difference_sum - a.difference_sum).abs(),
            (b.mass_sum - a.mass_sum).abs()
        );
    }
    Ok(decreasing)
}

fn run_sweep(config: &RunConfig) -> Result<bool> {
    let range = config.sweep.expect("sweep range validated");
    let mut rows = Vec::new();
    let mut ok = true;
    for v in range.values() {
        let (params, radius) = sweep_point(&config.params, config.solve.radius, config.zeta_explicit, range.axis, v)
            .map_err(|e| Error::Config(e.to_string()))?;
        let coeff = build_coefficients(config, &params, radius)?;
        let mut solve = config.solve.clone();
        solve.radius = radius;
        let c = solve_mode(&coeff, &params, &solve, Mode::Ground);
        let m = solve_mode(&coeff, &params, &solve, Mode::SignChanging);
        for (what, res) in [("ground", &c), ("sign_changing", &m)] {
            if let Err(e) = res {
                report_failure(&format!("{} = {v}: {what}", range.axis.tag()), e);
            }
        }
        let level = |r: &Result<SolveResult>| r.as_ref().map_or(f64::NAN, |s| s.energy);
        let (cs, ms) = (level(&c), level(&m));
        let holds = ms >= 2.0 * cs - 1e-8 * ms.abs();
        ok &= holds;
        println!("{} = {v}: c*={cs} m*={ms} m*-2c*={:e} {}", range.axis.tag(), ms - 2.0 * cs, if holds { "holds" } else { "FAIL" });
        rows.push(vec![
            range.axis.tag().to_string(),
            format_f64(v),
            format_f64(params.p),
            format_f64(params.q),
            format_f64(params.r),
            format_f64(params.zeta),
            radius.to_string(),
            format_f64(cs),
            format_f64(ms),
            format_f64(ms - 2.0 * cs),
            holds.to_string(),
            c.is_ok().to_string(),
            m.is_ok().to_string(),
            config.solve.seed.to_string(),
            coeff.family().tag().to_string(),
        ]);
    }
    write_csv(&config.out_dir.join("sweep.csv"), SWEEP_HEADER, &rows)?;
    Ok(ok)
}

/// Executes a parsed configuration and returns the process exit status:
/// 0 when everything converged and passed, 1 otherwise.
pub fn run(config: &RunConfig) -> i32 {
    let outcome = fs::create_dir_all(&config.out_dir).map_err(Error::from).and_then(|_| match config.command {
        Command::Solve => run_solve(config),
        Command::Verify => run_verify(config),
        Command::Counterexample => run_counterexample(config),
        Command::Sweep => run_sweep(config),
    });
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Parses and runs; the exit status follows [`run`], with 2 for usage and
/// constraint errors.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_config(argv) {
        Ok(config) => run(&config),
        Err(CliError::Help(text)) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_example_parses() {
        let cfg = parse_config(["dplap", "solve", "--p", "2", "--q", "3", "--r", "1", "--window", "64", "--mode", "ground", "--seed", "42"]).unwrap();
        assert_eq!(cfg.command, Command::Solve);
        assert_eq!(cfg.solve.radius, 64);
        assert_eq!(cfg.solve.seed, 42);
        assert_eq!(cfg.modes, ModeSelection::Ground);
        assert_eq!(cfg.params.zeta, 4.0);
    }

    #[test]
    fn q_below_p_is_a_constraint_error() {
        let err = parse_config(["dplap", "solve", "--q", "1.5", "--p", "2"]).unwrap_err();
        assert!(matches!(err, CliError::Constraint(_)), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn odd_p_decomposition_is_a_constraint_error() {
        let err = parse_config(["dplap", "verify", "--suite", "decomposition", "--p", "3", "--q", "4"]).unwrap_err();
        assert!(matches!(err, CliError::Constraint(_)), "{err}");
    }

    #[test]
    fn unknown_flag_is_a_usage_error() {
        let err = parse_config(["dplap", "solve", "--bogus", "1"]).unwrap_err();
        assert!(matches!(&err, CliError::Usage(m) if m.contains("--bogus")), "{err}");
        let err = parse_config(["dplap", "sweep", "--from", "2.5"]).unwrap_err();
        assert!(matches!(&err, CliError::Usage(m) if m.contains("--param")), "{err}");
    }

    #[test]
    fn counterexample_defaults() {
        let cfg = parse_config(["dplap", "counterexample"]).unwrap();
        assert_eq!(cfg.params.q, 2.0);
        assert_eq!(cfg.solve.radius, DEFAULT_COUNTEREXAMPLE_RADIUS);
        assert_eq!(decade_checkpoints(1_000_000, 4), vec![10, 100, 1000, 10_000, 100_000, 1_000_000]);
        assert_eq!(decade_checkpoints(50, 4), vec![10, 50]);
    }

    #[test]
    fn polynomial_alias() {
        let cfg = parse_config(["dplap", "solve", "--profile", "polynomial"]).unwrap();
        assert_eq!(cfg.profile, CoefficientFamily::Appendix1);
    }

    #[test]
    fn sweep_values_inclusive() {
        let cfg = parse_config(["dplap", "sweep", "--param", "q", "--from", "2.5", "--to", "4", "--step", "0.5"]).unwrap();
        assert_eq!(cfg.sweep.unwrap().values(), vec![2.5, 3.0, 3.5, 4.0]);
    }
}
