//! Command-line front end. `run` returns the process exit code: 0 on
//! success, 1 when a check fails or the computation errors (any report is
//! still written), 2 on usage errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::curve::{gaussian_curve, quartic_curve, SpectralCurve};
use crate::density::{profile, DensityProfile};
use crate::error::{Error, Result};
use crate::mc::{cluster_edges, compare_histogram, sample_spectrum_gaussian, McConfig};
use crate::params::solve_parameters;
use crate::sheets::{branch_structure, BranchStructure, Sheets};
use crate::verify::{full_report, gaussian_report, Tolerances, VerificationReport, DEFAULT_SEED};

/// Environment variable that sets the worker thread count.
pub const THREADS_ENV: &str = "SPECTRAL_CURVE_THREADS";

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "spectral-curve", version, about = "Spectral curves of random matrices with a two-level external source")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gaussian curve coefficients, or a sheet sweep along the real axis.
    GaussianCurve(CurveArgs),
    /// Solve the quartic parameters and branch points.
    QuarticSolve(SolveArgs),
    /// Run every check and write the verification report.
    Verify(VerifyArgs),
    /// Density profile on Chebyshev points of each cut.
    Density(DensityArgs),
    /// Monte Carlo spectra of source-plus-GUE matrices against the curve density.
    Mc(McArgs),
    /// Parameters, verification and density summary in one document.
    Report(ReportArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Field {
    Quartic,
    Gaussian,
}

#[derive(Args, Debug)]
struct Output {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    /// Fraction of eigenvalues of the source at -a.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    x2: f64,
    /// Points of the sheet sweep (csv).
    #[arg(long, default_value_t = 200)]
    grid: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Points of the sheet sweep (csv).
    #[arg(long, default_value_t = 200)]
    grid: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    /// Verify the Gaussian curve with this fraction instead of the quartic.
    #[arg(long, allow_negative_numbers = true)]
    x2: Option<f64>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Seed of the random entirety test points.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct DensityArgs {
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, value_enum, default_value_t = Field::Quartic)]
    field: Field,
    /// Source fraction for the Gaussian field.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    x2: f64,
    /// Points per cut.
    #[arg(long, default_value_t = 400)]
    grid: usize,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct McArgs {
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, default_value_t = 400)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 80)]
    bins: usize,
    /// Points per cut of the reference density.
    #[arg(long, default_value_t = 400)]
    grid: usize,
    /// json: comparison record; csv: eigenvalues tagged by sample.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Points per cut of the density summary.
    #[arg(long, default_value_t = 400)]
    grid: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    output: Output,
}

/// Resolved configuration echoed at the top of every output.
#[derive(Clone, Debug, Serialize)]
struct Header {
    tool: &'static str,
    version: &'static str,
    subcommand: &'static str,
    flags: BTreeMap<&'static str, Value>,
    seed: Option<u64>,
}

impl Header {
    fn comment(&self) -> String {
        let mut s = format!("# {} {}\n# subcommand: {}\n", self.tool, self.version, self.subcommand);
        let flags: Vec<String> = self.flags.iter().map(|(k, v)| format!("--{k} {}", plain(v))).collect();
        let _ = writeln!(s, "# flags: {}", flags.join(" "));
        match self.seed {
            Some(seed) => {
                let _ = writeln!(s, "# seed: {seed}");
            }
            None => s.push_str("# seed: none\n"),
        }
        s
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    header: &'a Header,
    #[serde(flatten)]
    body: T,
}

/// Fixed 17-significant-digit rendering.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_doc<T: Serialize>(header: &Header, body: T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&Document { header, body })?;
    s.push('\n');
    Ok(s)
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

struct Outcome {
    text: String,
    pass: bool,
}

fn ok(text: String) -> Result<Outcome> {
    Ok(Outcome { text, pass: true })
}

/// Entry point for the binary; `argv[0]` is the program name.
pub fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let out = match &cli.command {
        Command::GaussianCurve(a) => &a.output,
        Command::QuarticSolve(a) => &a.output,
        Command::Verify(a) => &a.output,
        Command::Density(a) => &a.output,
        Command::Mc(a) => &a.output,
        Command::Report(a) => &a.output,
    };
    let result = pool.install(|| dispatch(&cli.command));
    match result {
        Ok(outcome) => {
            if let Err(e) = emit(&outcome.text, out) {
                eprintln!("error: {e}");
                return 1;
            }
            if outcome.pass {
                0
            } else {
                1
            }
        }
        Err(Error::InvalidArgument(msg)) => {
            eprintln!("error: invalid argument: {msg}");
            eprintln!("\nFor more information, try '--help'.");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn thread_pool() -> std::result::Result<rayon::ThreadPool, String> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().map_err(|_| format!("{THREADS_ENV} = {v:?} is not a thread count"))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| e.to_string())
}

fn emit(text: &str, out: &Output) -> std::io::Result<()> {
    match &out.out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            let mut o = std::io::stdout().lock();
            o.write_all(text.as_bytes())?;
            o.flush()
        }
    }
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::GaussianCurve(a) => gaussian_cmd(a),
        Command::QuarticSolve(a) => solve_cmd(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Density(a) => density_cmd(a),
        Command::Mc(a) => mc_cmd(a),
        Command::Report(a) => report_cmd(a),
    }
}

fn flags<const N: usize>(pairs: [(&'static str, Value); N]) -> BTreeMap<&'static str, Value> {
    pairs.into_iter().collect()
}

fn header(subcommand: &'static str, flags: BTreeMap<&'static str, Value>, seed: Option<u64>) -> Header {
    Header { tool: TOOL, version: VERSION, subcommand, flags, seed }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("--{name} {v} must be positive")))
    }
}

fn nonzero(name: &str, v: usize) -> Result<()> {
    if v > 0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("--{name} must be positive")))
    }
}

/// Roots on the real axis, `grid` points spanning twice the support.
fn sweep_csv(h: &Header, curve: &SpectralCurve, branch: &BranchStructure, grid: usize) -> Result<String> {
    let sheets = Sheets::new(curve, branch)?;
    let m = 2.0 * branch.max_abs_endpoint();
    let zs: Vec<Complex64> = (0..grid).map(|i| Complex64::new(-m + 2.0 * m * (i as f64 + 0.5) / grid as f64, 0.0)).collect();
    let vals = sheets.sweep(&zs)?;
    let mut s = h.comment();
    s.push_str("# points inside a cut carry the limit from the upper half-plane\n");
    s.push_str("z_re,z_im,r1_re,r1_im,r2_re,r2_im,r3_re,r3_im\n");
    for v in vals {
        let cols: Vec<String> = [v.z, v.r1, v.r2, v.r3].iter().flat_map(|c| [fmt17(c.re), fmt17(c.im)]).collect();
        s.push_str(&cols.join(","));
        s.push('\n');
    }
    Ok(s)
}

fn gaussian_cmd(a: &CurveArgs) -> Result<Outcome> {
    positive("a", a.a)?;
    let curve = gaussian_curve(a.a, a.x2)?;
    let h = header(
        "gaussian-curve",
        flags([("a", json!(a.a)), ("x2", json!(a.x2)), ("grid", json!(a.grid)), ("format", json!(format_name(a.format)))]),
        None,
    );
    match a.format {
        Format::Json => ok(json_doc(&h, &curve)?),
        Format::Csv => {
            nonzero("grid", a.grid)?;
            let br = branch_structure(&curve, 1e-6)?;
            ok(sweep_csv(&h, &curve, &br, a.grid)?)
        }
    }
}

#[derive(Serialize)]
struct Solution<'a> {
    a: f64,
    alpha: f64,
    beta: f64,
    gamma1: f64,
    gamma2: f64,
    lambda_star: Option<[f64; 2]>,
    i1: [f64; 2],
    i2: [f64; 2],
    iterations: usize,
    grad_norm: f64,
    b2_residual: f64,
    b1: f64,
    hessian_det: f64,
    hessian_ratio: f64,
    local_max: bool,
    factor_residual: f64,
    curve: &'a SpectralCurve,
    pass: bool,
}

fn solve_cmd(a: &SolveArgs) -> Result<Outcome> {
    positive("a", a.a)?;
    positive("tol", a.tol)?;
    let h = header(
        "quartic-solve",
        flags([("a", json!(a.a)), ("tol", json!(a.tol)), ("grid", json!(a.grid)), ("format", json!(format_name(a.format)))]),
        None,
    );
    let (p, br) = solve_parameters(a.a, a.tol)?;
    let curve = quartic_curve(a.a, p.alpha, p.beta)?;
    match a.format {
        Format::Json => {
            let pass = p.grad_norm <= a.tol && br.factor_residual <= 1e-6;
            let body = Solution {
                a: p.a,
                alpha: p.alpha,
                beta: p.beta,
                gamma1: br.gamma1,
                gamma2: br.gamma2,
                lambda_star: br.lambda_star.map(|l| [l.re, l.im]),
                i1: br.i1,
                i2: br.i2,
                iterations: p.iterations,
                grad_norm: p.grad_norm,
                b2_residual: p.b2_residual,
                b1: p.b1,
                hessian_det: p.hessian_det,
                hessian_ratio: p.hessian_ratio(),
                local_max: p.is_local_max(a.a),
                factor_residual: br.factor_residual,
                curve: &curve,
                pass,
            };
            Ok(Outcome { text: json_doc(&h, body)?, pass })
        }
        Format::Csv => {
            nonzero("grid", a.grid)?;
            ok(sweep_csv(&h, &curve, &br, a.grid)?)
        }
    }
}

fn verification(a: f64, x2: Option<f64>, tol: f64, seed: u64) -> Result<VerificationReport> {
    positive("a", a)?;
    positive("tol", tol)?;
    match x2 {
        Some(x2) => gaussian_report(a, x2, &Tolerances::default(), seed),
        None => Ok(full_report(a, tol, &Tolerances::default(), seed)),
    }
}

fn checks_csv(h: &Header, r: &VerificationReport) -> String {
    let mut s = h.comment();
    let _ = writeln!(s, "# pass: {}", r.pass);
    s.push_str("name,worst,at_re,at_im,pass,skipped\n");
    for c in &r.checks {
        let worst = c.worst.map(fmt17).unwrap_or_default();
        let (re, im) = match c.at {
            Some(crate::verify::At::Real(x)) => (fmt17(x), fmt17(0.0)),
            Some(crate::verify::At::Complex([x, y])) => (fmt17(x), fmt17(y)),
            None => (String::new(), String::new()),
        };
        let _ = writeln!(s, "{},{worst},{re},{im},{},{}", c.name, c.pass, c.skipped);
    }
    s
}

fn verify_cmd(a: &VerifyArgs) -> Result<Outcome> {
    let mut f = flags([("a", json!(a.a)), ("tol", json!(a.tol)), ("seed", json!(a.seed)), ("format", json!(format_name(a.format)))]);
    if let Some(x2) = a.x2 {
        f.insert("x2", json!(x2));
    }
    let h = header("verify", f, Some(a.seed));
    let r = verification(a.a, a.x2, a.tol, a.seed)?;
    let text = match a.format {
        Format::Json => json_doc(&h, &r)?,
        Format::Csv => checks_csv(&h, &r),
    };
    Ok(Outcome { text, pass: r.pass })
}

fn density_profile(field: Field, a: f64, x2: f64, grid: usize, tol: f64) -> Result<DensityProfile> {
    positive("a", a)?;
    nonzero("grid", grid)?;
    let (curve, br) = match field {
        Field::Quartic => {
            let (p, br) = solve_parameters(a, tol)?;
            (quartic_curve(a, p.alpha, p.beta)?, br)
        }
        Field::Gaussian => {
            let c = gaussian_curve(a, x2)?;
            let br = branch_structure(&c, 1e-6)?;
            (c, br)
        }
    };
    profile(&Sheets::new(&curve, &br)?, grid)
}

fn field_name(f: Field) -> &'static str {
    match f {
        Field::Quartic => "quartic",
        Field::Gaussian => "gaussian",
    }
}

fn density_cmd(a: &DensityArgs) -> Result<Outcome> {
    let mut f = flags([
        ("a", json!(a.a)),
        ("field", json!(field_name(a.field))),
        ("grid", json!(a.grid)),
        ("tol", json!(a.tol)),
        ("format", json!(format_name(a.format))),
    ]);
    if a.field == Field::Gaussian {
        f.insert("x2", json!(a.x2));
    }
    let h = header("density", f, None);
    let p = density_profile(a.field, a.a, a.x2, a.grid, a.tol)?;
    match a.format {
        Format::Json => ok(json_doc(&h, &p)?),
        Format::Csv => {
            let mut s = h.comment();
            for (k, (iv, m)) in p.support.iter().zip(&p.masses).enumerate() {
                let _ = writeln!(s, "# I{}: [{}, {}] mass {}", k + 1, fmt17(iv[0]), fmt17(iv[1]), fmt17(*m));
            }
            let _ = writeln!(s, "# total mass {}", fmt17(p.total_mass));
            s.push_str("x,rho\n");
            for (x, r) in p.xs.iter().zip(&p.rho) {
                let _ = writeln!(s, "{},{}", fmt17(*x), fmt17(*r));
            }
            ok(s)
        }
    }
}

#[derive(Serialize)]
struct McRecord {
    cdf_sup_distance: f64,
    cdf_sup_at: f64,
    per_bin_max: f64,
    n: usize,
    samples: usize,
    seed: u64,
    a: f64,
    bins: usize,
    cluster_edges: [f64; 4],
    branch_points: [f64; 4],
}

fn mc_cmd(a: &McArgs) -> Result<Outcome> {
    let cfg = McConfig { n: a.n, samples: a.samples, seed: a.seed, bins: a.bins };
    cfg.validate()?;
    let h = header(
        "mc",
        flags([
            ("a", json!(a.a)),
            ("n", json!(a.n)),
            ("samples", json!(a.samples)),
            ("seed", json!(a.seed)),
            ("bins", json!(a.bins)),
            ("grid", json!(a.grid)),
            ("format", json!(format_name(a.format))),
        ]),
        Some(a.seed),
    );
    let batch = sample_spectrum_gaussian(&cfg, a.a)?;
    match a.format {
        Format::Csv => {
            let mut s = h.comment();
            s.push_str("sample,eigenvalue\n");
            for (i, sample) in batch.samples().enumerate() {
                for x in sample {
                    let _ = writeln!(s, "{i},{}", fmt17(*x));
                }
            }
            ok(s)
        }
        Format::Json => {
            positive("a", a.a)?;
            nonzero("grid", a.grid)?;
            let curve = gaussian_curve(a.a, 0.5)?;
            let br = branch_structure(&curve, 1e-6)?;
            let p = profile(&Sheets::new(&curve, &br)?, a.grid)?;
            let c = compare_histogram(&batch, &p, a.bins);
            let rec = McRecord {
                cdf_sup_distance: c.cdf_sup_distance,
                cdf_sup_at: c.cdf_sup_at,
                per_bin_max: c.per_bin_max,
                n: a.n,
                samples: a.samples,
                seed: a.seed,
                a: a.a,
                bins: a.bins,
                cluster_edges: cluster_edges(&batch),
                branch_points: br.endpoints(),
            };
            ok(json_doc(&h, rec)?)
        }
    }
}

#[derive(Serialize)]
struct Bundle<'a> {
    report: &'a VerificationReport,
    density: Option<Value>,
    pass: bool,
}

fn report_cmd(a: &ReportArgs) -> Result<Outcome> {
    let h = header(
        "report",
        flags([
            ("a", json!(a.a)),
            ("tol", json!(a.tol)),
            ("seed", json!(a.seed)),
            ("grid", json!(a.grid)),
            ("format", json!(format_name(a.format))),
        ]),
        Some(a.seed),
    );
    let r = verification(a.a, None, a.tol, a.seed)?;
    let dens = if r.alpha.is_some() { Some(density_profile(Field::Quartic, a.a, 0.5, a.grid, a.tol)?) } else { None };
    match a.format {
        Format::Json => {
            let density = dens.map(|p| json!({"support": p.support, "masses": p.masses, "total_mass": p.total_mass}));
            let text = json_doc(&h, Bundle { report: &r, density, pass: r.pass })?;
            Ok(Outcome { text, pass: r.pass })
        }
        Format::Csv => {
            let mut s = checks_csv(&h, &r);
            if let Some(p) = dens {
                let _ = writeln!(s, "# masses {} {} total {}", fmt17(p.masses[0]), fmt17(p.masses[1]), fmt17(p.total_mass));
            }
            Ok(Outcome { text: s, pass: r.pass })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<String> {
        std::iter::once("spectral-curve").chain(s.split_whitespace()).map(String::from).collect()
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(argv("")), 2);
        assert_eq!(run(argv("quartic-solve")), 2);
        assert_eq!(run(argv("quartic-solve --a 10 --bogus 1")), 2);
        assert_eq!(run(argv("density --a 10 --format xml")), 2);
        assert_eq!(run(argv("mc --n 7 --samples 1")), 2);
        assert_eq!(run(argv("gaussian-curve --a -1")), 2);
    }

    #[test]
    fn help_exits_0() {
        assert_eq!(run(argv("--help")), 0);
        assert_eq!(run(argv("mc --help")), 0);
    }

    #[test]
    fn fixed_width_numbers() {
        assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt17(-2.0), "-2.0000000000000000e0");
        assert_eq!(fmt17(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn gaussian_curve_json() {
        let c = gaussian_cmd(&CurveArgs { a: 2.0, x2: 0.5, grid: 10, format: Format::Json, output: Output { out: None } }).unwrap();
        let v: Value = serde_json::from_str(&c.text).unwrap();
        assert_eq!(v["header"]["subcommand"], "gaussian-curve");
        assert_eq!(v["a"], 2.0);
        assert_eq!(v["field"], "gaussian");
        assert!(v["c0"].is_array());
    }

    #[test]
    fn sweep_has_header_and_columns() {
        let c = gaussian_cmd(&CurveArgs { a: 2.0, x2: 0.5, grid: 10, format: Format::Csv, output: Output { out: None } }).unwrap();
        let lines: Vec<&str> = c.text.lines().collect();
        assert!(lines[0].starts_with("# spectral-curve "));
        let cols = lines.iter().find(|l| !l.starts_with('#')).unwrap();
        assert_eq!(*cols, "z_re,z_im,r1_re,r1_im,r2_re,r2_im,r3_re,r3_im");
        assert_eq!(lines.iter().filter(|l| !l.starts_with('#')).count(), 11);
    }
}
