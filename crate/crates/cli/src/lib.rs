//! Command-line front end: argument parsing, spin-structure resolution and
//! output emission. `run` returns the process exit code.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use bieberbach_core::io::{format_float, spectrum_to_csv, spectrum_to_json, ActionRecord};
use bieberbach_core::spectra::{decomposition, is_admissible};
use bieberbach_core::verify::{run_suite, SuiteConfig, SUITES};
use bieberbach_core::{
    admissible_spin_structures, bieberbach_spectrum, eta_bieberbach, torus_eigenvalues,
    torus_leading_term, truncated_action_with, CutoffFunction, Delta, Error, EtaReport, HalfShift,
    ManifoldId, SpinStructure, TorusAngle, TorusDirac, WeightedSpectrum,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const THREADS_ENV: &str = "BIEBERBACH_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "bieberbach",
    version,
    about = "Dirac spectra, spectral actions and eta invariants of the flat 3-torus \
             and the orientable Bieberbach manifolds",
    after_help = "Set BIEBERBACH_THREADS to limit the worker threads \
                  (default: available parallelism)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate the Dirac spectrum up to |λ| ≤ lambda-max, with exact
    /// eigenvalue keys and rational multiplicities.
    Spectrum(SpectrumArgs),
    /// Evaluate the truncated spectral action Σ f(λ/Λ) and compare it with
    /// the Poisson leading term of the covering torus divided by the group
    /// order.
    Action(ActionArgs),
    /// Eta invariant of the Dirac operator: closed form, Hurwitz zeta
    /// oracle, small-time heat-trace extrapolation and the published value.
    Eta(EtaArgs),
    /// Run property checks (divisibility of multiplicities, invariance of
    /// even cutoffs, eta limit of the odd cutoff, circle scaling identity,
    /// eta table) and emit one JSON report per line.
    Verify(VerifyArgs),
    /// Eta table over every manifold and spin structure, followed by the
    /// leading-term comparison of the gaussian action on each manifold.
    Table(TableArgs),
}

#[derive(Args, Debug, Clone)]
struct SpinArgs {
    /// Manifold: T3, G2, G3, G4, G5 or G6.
    #[arg(long, default_value = "T3", value_parser = parse_manifold)]
    manifold: ManifoldId,
    /// Torus angle (T3 only): pi/2, 2pi/3, pi/4 or radians.
    #[arg(long, value_parser = parse_angle)]
    phi: Option<TorusAngle>,
    /// Spin shift ε₁ (0 or 0.5).
    #[arg(long, value_parser = parse_shift)]
    eps1: Option<HalfShift>,
    /// Spin shift ε₂ (0 or 0.5).
    #[arg(long, value_parser = parse_shift)]
    eps2: Option<HalfShift>,
    /// Spin shift ε₃ (0 or 0.5).
    #[arg(long, value_parser = parse_shift)]
    eps3: Option<HalfShift>,
    /// δ = +1 or -1; for G6 the sign of the first generator.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
    delta: Option<bool>,
    /// Sign of the second generator (G6 only).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
    delta2: Option<bool>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    spin: SpinArgs,
    /// Truncation radius.
    #[arg(long, default_value_t = 10.0)]
    lambda_max: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct CutoffArgs {
    /// gaussian, exp_even, exp_odd or tabulated (with --table).
    #[arg(long, default_value = "gaussian")]
    cutoff: String,
    /// Two-column CSV `x,f(x)` for a piecewise-linear cutoff.
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ActionArgs {
    #[command(flatten)]
    spin: SpinArgs,
    #[command(flatten)]
    cutoff: CutoffArgs,
    /// Energy scale Λ.
    #[arg(long)]
    lambda: f64,
    /// Truncation radius (default: the cutoff's tail factor times Λ).
    #[arg(long)]
    lambda_max: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct EtaArgs {
    #[command(flatten)]
    spin: SpinArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// divisibility, even, odd, scaling, eta or all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Energy scale Λ.
    #[arg(long, default_value_t = 10.0)]
    lambda: f64,
    /// Truncation radius for the spectrum checks.
    #[arg(long, default_value_t = 20.0)]
    lambda_max: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// Energy scale Λ of the leading-term comparison.
    #[arg(long, default_value_t = 5.0)]
    lambda: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    out: OutputArgs,
}

fn parse_manifold(s: &str) -> Result<ManifoldId, String> {
    s.parse()
}

fn parse_angle(s: &str) -> Result<TorusAngle, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_shift(s: &str) -> Result<HalfShift, String> {
    s.parse()
}

fn parse_sign(s: &str) -> Result<bool, String> {
    match s.trim() {
        "+1" | "1" => Ok(true),
        "-1" => Ok(false),
        other => Err(format!("expected +1 or -1, got {other:?}")),
    }
}

enum Failure {
    Usage(String),
    Computation(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Computation(e)
    }
}

/// Spin structure determined by the given flags: the unique admissible
/// structure agreeing with every flag that was set.
fn resolve_spin(a: &SpinArgs) -> Result<SpinStructure, Failure> {
    let m = a.manifold;
    if a.phi.is_some() && m != ManifoldId::T3 {
        return Err(Failure::Usage(format!(
            "--phi applies to T3 only; {m} fixes its torus angle"
        )));
    }
    if a.delta2.is_some() && m != ManifoldId::G6 {
        return Err(Failure::Usage("--delta2 applies to G6 only".into()));
    }
    let given = [a.eps1, a.eps2, a.eps3];
    let matches: Vec<SpinStructure> = admissible_spin_structures(m)
        .into_iter()
        .filter(|s| {
            let eps_ok = given.iter().zip(s.eps).all(|(g, e)| g.map_or(true, |g| g == e));
            let delta_ok = match (s.delta, a.delta, a.delta2) {
                (_, None, None) => true,
                (Delta::Plus, Some(d), None) => d,
                (Delta::Minus, Some(d), None) => !d,
                (Delta::Pair(x, y), d, d2) => d.map_or(true, |d| d == x) && d2.map_or(true, |d| d == y),
                _ => false,
            };
            eps_ok && delta_ok
        })
        .collect();
    match matches.as_slice() {
        [s] => {
            debug_assert!(is_admissible(m, s));
            Ok(*s)
        }
        [] => Err(Failure::Usage(format!(
            "no admissible spin structure on {m} matches the given flags; admissible: {}",
            list_spins(m)
        ))),
        _ => Err(Failure::Usage(format!(
            "spin structure on {m} is ambiguous; candidates: {}",
            matches.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("; ")
        ))),
    }
}

fn list_spins(m: ManifoldId) -> String {
    admissible_spin_structures(m)
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

fn positive(name: &str, v: f64) -> Result<f64, Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::Usage(format!("--{name} must be positive and finite, got {v}")))
    }
}

fn angle_of(m: ManifoldId, a: &SpinArgs) -> Result<TorusAngle, Failure> {
    if m == ManifoldId::T3 {
        return Ok(a.phi.unwrap_or(TorusAngle::Right));
    }
    Ok(decomposition(m, &resolve_spin(a)?)?.torus.angle)
}

fn spectrum_of(a: &SpinArgs, s: &SpinStructure, lambda_max: f64) -> Result<WeightedSpectrum, Failure> {
    Ok(match a.manifold {
        ManifoldId::T3 => torus_eigenvalues(
            &TorusDirac::new(a.phi.unwrap_or(TorusAngle::Right), *s),
            lambda_max,
        )?,
        m => bieberbach_spectrum(m, s, lambda_max)?,
    })
}

fn load_cutoff(c: &CutoffArgs) -> Result<CutoffFunction, Failure> {
    if c.cutoff.eq_ignore_ascii_case("tabulated") {
        let Some(path) = &c.table else {
            return Err(Failure::Usage("--cutoff tabulated requires --table".into()));
        };
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split(',').map(str::trim);
            let (Some(x), Some(y), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Failure::Usage(format!("table line {}: expected `x,y`", i + 1)));
            };
            match (x.parse::<f64>(), y.parse::<f64>()) {
                (Ok(x), Ok(y)) => {
                    xs.push(x);
                    ys.push(y);
                }
                // header row
                _ if xs.is_empty() && i == 0 => continue,
                _ => return Err(Failure::Usage(format!("table line {}: not numeric", i + 1))),
            }
        }
        return Ok(CutoffFunction::tabulated(xs, ys)?);
    }
    if c.table.is_some() {
        return Err(Failure::Usage("--table requires --cutoff tabulated".into()));
    }
    CutoffFunction::from_name(&c.cutoff).ok_or_else(|| {
        Failure::Usage(format!(
            "unknown cutoff {:?}; expected gaussian, exp_even, exp_odd or tabulated",
            c.cutoff
        ))
    })
}

fn action_record(
    m: ManifoldId,
    spin: Option<SpinStructure>,
    s: &WeightedSpectrum,
    angle: &TorusAngle,
    f: &CutoffFunction,
    lambda: f64,
) -> Result<ActionRecord, Failure> {
    let value = truncated_action_with(s, f, lambda, s.lambda_max() / lambda)?.value;
    let leading = torus_leading_term(angle, f, lambda)?.value / m.group_order() as f64;
    Ok(ActionRecord {
        manifold: m.name().to_string(),
        spin,
        kind: f.name().to_string(),
        lambda,
        value,
        leading_term: leading,
        residual: value - leading,
    })
}

const ACTION_CSV_HEADER: &str = "manifold,spin,kind,lambda,value,leading_term,residual";

fn action_csv_row(r: &ActionRecord) -> String {
    format!(
        "{},{},{},{},{},{},{}\n",
        r.manifold,
        r.spin.map_or(String::new(), |s| format!("\"{s}\"")),
        r.kind,
        format_float(r.lambda),
        format_float(r.value),
        format_float(r.leading_term),
        format_float(r.residual)
    )
}

fn json<T: serde::Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn cmd_spectrum(a: &SpectrumArgs) -> Result<(String, i32), Failure> {
    let lm = positive("lambda-max", a.lambda_max)?;
    let s = resolve_spin(&a.spin)?;
    let spectrum = spectrum_of(&a.spin, &s, lm)?;
    let text = match a.format {
        Format::Csv => spectrum_to_csv(&spectrum),
        Format::Json => spectrum_to_json(&spectrum) + "\n",
    };
    Ok((text, EXIT_OK))
}

fn cmd_action(a: &ActionArgs) -> Result<(String, i32), Failure> {
    let lambda = positive("lambda", a.lambda)?;
    let f = load_cutoff(&a.cutoff)?;
    let s = resolve_spin(&a.spin)?;
    let lm = match a.lambda_max {
        Some(v) => positive("lambda-max", v)?,
        None => f.default_tail_factor().max(1.0) * lambda,
    };
    let angle = angle_of(a.spin.manifold, &a.spin)?;
    let spectrum = spectrum_of(&a.spin, &s, lm)?;
    let rec = action_record(a.spin.manifold, Some(s), &spectrum, &angle, &f, lambda)?;
    let text = match a.format {
        Format::Json => json(&rec),
        Format::Csv => format!("{ACTION_CSV_HEADER}\n{}", action_csv_row(&rec)),
    };
    Ok((text, EXIT_OK))
}

fn cmd_eta(a: &EtaArgs) -> Result<(String, i32), Failure> {
    let s = resolve_spin(&a.spin)?;
    Ok((json(&eta_bieberbach(a.spin.manifold, &s)?), EXIT_OK))
}

fn cmd_verify(a: &VerifyArgs) -> Result<(String, i32), Failure> {
    let config = SuiteConfig {
        lambda: positive("lambda", a.lambda)?,
        lambda_max: positive("lambda-max", a.lambda_max)?,
    };
    let reports = run_suite(&a.suite, config).ok_or_else(|| {
        Failure::Usage(format!(
            "unknown suite {:?}; expected one of {}",
            a.suite,
            SUITES.join(", ")
        ))
    })?;
    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.to_json_line());
        text.push('\n');
    }
    let code = if reports.iter().all(|r| r.passed()) {
        EXIT_OK
    } else {
        EXIT_COMPUTATION
    };
    Ok((text, code))
}

fn cmd_table(a: &TableArgs) -> Result<(String, i32), Failure> {
    let lambda = positive("lambda", a.lambda)?;
    let mut etas: Vec<EtaReport> = Vec::new();
    for m in ManifoldId::ALL {
        for s in admissible_spin_structures(m) {
            etas.push(eta_bieberbach(m, &s)?);
        }
    }
    let f = CutoffFunction::gaussian();
    let lm = f.default_tail_factor() * lambda;
    let mut leading = Vec::new();
    for m in ManifoldId::ALL {
        let s = admissible_spin_structures(m)[0];
        let dec = decomposition(m, &s)?;
        let spectrum = bieberbach_spectrum(m, &s, lm)?;
        leading.push(action_record(m, Some(s), &spectrum, &dec.torus.angle, &f, lambda)?);
    }
    let text = match a.format {
        Format::Json => json(&serde_json::json!({ "eta_table": etas, "leading_terms": leading })),
        Format::Csv => {
            let mut t = String::from("manifold,spin,formula,oracle,extrapolated,paper_table,discrepancy_flag\n");
            for e in &etas {
                let _ = writeln!(
                    t,
                    "{},\"{}\",{},{},{},{},{}",
                    e.manifold,
                    e.spin,
                    e.formula,
                    e.oracle,
                    format_float(e.extrapolated),
                    e.published.map_or(String::new(), |p| p.to_string()),
                    e.discrepancy_flag
                );
            }
            t.push('\n');
            t.push_str(ACTION_CSV_HEADER);
            t.push('\n');
            for r in &leading {
                t.push_str(&action_csv_row(r));
            }
            t
        }
    };
    Ok((text, EXIT_OK))
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
    // a pool may already exist when run is called repeatedly in-process
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `argv` (including the program name), executes the command and
/// writes the artifact to `--output` or `stdout`. Diagnostics go to `stderr`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let outcome = configure_threads().and_then(|()| {
        let output = match &cli.command {
            Command::Spectrum(a) => &a.out.output,
            Command::Action(a) => &a.out.output,
            Command::Eta(a) => &a.out.output,
            Command::Verify(a) => &a.out.output,
            Command::Table(a) => &a.out.output,
        };
        let (text, code) = match &cli.command {
            Command::Spectrum(a) => cmd_spectrum(a),
            Command::Action(a) => cmd_action(a),
            Command::Eta(a) => cmd_eta(a),
            Command::Verify(a) => cmd_verify(a),
            Command::Table(a) => cmd_table(a),
        }?;
        match output {
            Some(path) => fs::write(path, &text)
                .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?,
            None => stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Io(e.to_string()))?,
        }
        Ok(code)
    });
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Computation(e)) => {
            let _ = writeln!(stderr, "error: {}: {e}", e.name());
            EXIT_COMPUTATION
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_COMPUTATION
        }
    }
}
