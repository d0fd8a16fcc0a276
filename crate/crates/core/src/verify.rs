//! Numerical certification of a solved curve: boundary relations, measure
//! sign, variational inequalities, edge exponents, entirety identities and
//! the g-level conditions, assembled into one report.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{quartic_curve, FieldKind, SpectralCurve};
use crate::density::{check_g_conditions, profile, GFunctions};
use crate::error::{Error, Result};
use crate::params::{solve_parameters, QuarticParameters};
use crate::quadrature::{integrate, integrate_with_breaks, Ends};
use crate::sheets::{branch_structure, BranchStructure, SheetValues, Sheets, Side};

type C = Complex64;

/// Where a check attained its worst value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum At {
    Real(f64),
    Complex([f64; 2]),
}

impl From<f64> for At {
    fn from(x: f64) -> Self {
        At::Real(x)
    }
}

impl From<C> for At {
    fn from(z: C) -> Self {
        At::Complex([z.re, z.im])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// What was sampled.
    pub grid: String,
    /// Largest residual, or the signed margin closest to violation.
    pub worst: Option<f64>,
    pub at: Option<At>,
    /// The pass condition on `worst`.
    pub bound: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub skipped: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRecord {
    fn new(name: impl Into<String>, grid: impl Into<String>, worst: f64, at: impl Into<At>, bound: impl Into<String>, pass: bool) -> Self {
        CheckRecord {
            name: name.into(),
            grid: grid.into(),
            worst: Some(worst),
            at: Some(at.into()),
            bound: bound.into(),
            pass: pass && worst.is_finite(),
            skipped: false,
            detail: None,
        }
    }

    fn failed(name: impl Into<String>, err: &Error) -> Self {
        CheckRecord {
            name: name.into(),
            grid: String::new(),
            worst: None,
            at: None,
            bound: String::new(),
            pass: false,
            skipped: false,
            detail: Some(err.to_string()),
        }
    }

    fn skipped(name: impl Into<String>, why: &str) -> Self {
        CheckRecord {
            name: name.into(),
            grid: String::new(),
            worst: None,
            at: None,
            bound: String::new(),
            pass: false,
            skipped: true,
            detail: Some(why.into()),
        }
    }

    fn with_detail(mut self, detail: String) -> Self {
        self.detail = Some(detail);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub boundary: f64,
    pub sign: f64,
    /// Distance from the endpoints, as a fraction of the cut length, below
    /// which the sign check is not applied.
    pub sign_clearance: f64,
    pub exponent: [f64; 2],
    pub integrated_exponent: [f64; 2],
    pub entirety: f64,
    pub constancy: f64,
    pub mass: f64,
    pub symmetry: f64,
    pub factorization: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            boundary: 1e-10,
            sign: 1e-6,
            sign_clearance: 0.01,
            exponent: [0.45, 0.55],
            integrated_exponent: [1.45, 1.55],
            entirety: 1e-8,
            constancy: 1e-6,
            mass: 1e-6,
            symmetry: 1e-10,
            factorization: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub a: f64,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
    pub field: FieldKind,
    pub tolerances: Tolerances,
    /// Seed of the random entirety test points.
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn argmax<I: IntoIterator<Item = (f64, T)>, T: Copy + Default>(it: I) -> (f64, T) {
    it.into_iter().fold((f64::NEG_INFINITY, T::default()), |m, v| if v.0 > m.0 || v.0.is_nan() { v } else { m })
}

fn interior(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64).collect()
}

fn cut_name(j: usize) -> String {
    format!("I{j}")
}

/// `max |f_j^+ + f_j^- + f_k - V_j'|` over `grid` interior points of `I_j`.
pub fn check_boundary_relation(s: &Sheets, j: usize, grid: usize, tol: f64) -> Result<CheckRecord> {
    let [lo, hi] = s.branch.cut(j);
    let xs = interior(lo, hi, grid);
    let vals = xs.par_iter().map(|&x| boundary_residual(s, j, x).map(|r| (r, x))).collect::<Result<Vec<_>>>()?;
    let (worst, at) = argmax(vals);
    Ok(CheckRecord::new(
        format!("boundary_relation_{}", cut_name(j)),
        format!("{grid} midpoints of {}", cut_name(j)),
        worst,
        at,
        format!("<= {tol:e}"),
        worst <= tol,
    ))
}

/// `|f_j^+ + f_j^- + f_k - V_j'|` at one point of `I_j`.
pub fn boundary_residual(s: &Sheets, j: usize, x: f64) -> Result<f64> {
    let k = 3 - j;
    let p = s.boundary(x, Side::Plus)?;
    let m = s.boundary(x, Side::Minus)?;
    let v = s.curve.vj_prime(j, C::new(x, 0.0));
    Ok((p.f(j) + m.f(j) + p.f(k) - v).norm())
}

/// `2 Im f_j^+ <= -tol` at points at least `clearance` of the cut length
/// away from both ends; `worst` is the largest value of `2 Im f_j^+`.
pub fn check_measure_sign(s: &Sheets, j: usize, grid: usize, tol: f64, clearance: f64) -> Result<CheckRecord> {
    let [lo, hi] = s.branch.cut(j);
    let pad = clearance * (hi - lo);
    let xs: Vec<f64> = (0..grid).map(|i| lo + pad + (hi - lo - 2.0 * pad) * i as f64 / (grid - 1).max(1) as f64).collect();
    let vals = xs.par_iter().map(|&x| s.boundary(x, Side::Plus).map(|v| (2.0 * v.f(j).im, x))).collect::<Result<Vec<_>>>()?;
    let (worst, at) = argmax(vals);
    Ok(CheckRecord::new(
        format!("measure_sign_{}", cut_name(j)),
        format!("{grid} points of {} at >= {clearance} of its length from the ends", cut_name(j)),
        worst,
        at,
        format!("<= {:e}", -tol),
        worst <= -tol,
    ))
}

/// Cumulative integral `C(x) = ∫_e^x Re(r_j - r_3^-)` from an endpoint `e`
/// of `I_j` toward `to`, reported at `checkpoints` equally spaced points of
/// the part of the path lying off `I_j`. Returns `(x, C(x))` pairs.
pub fn variational_integral(s: &Sheets, j: usize, e: f64, to: f64, checkpoints: usize) -> Result<Vec<(f64, f64)>> {
    let br = s.branch.endpoints();
    let [lo, hi] = s.branch.cut(j);
    // the integrand vanishes identically on I_j: r_j^- and r_3^- are conjugate
    let start = if to > e { hi.max(e) } else { lo.min(e) };
    let integrand = |x: f64| -> f64 {
        match s.boundary(x, Side::Minus) {
            Ok(v) => (v.r()[j - 1] - v.r3).re,
            Err(_) => f64::NAN,
        }
    };
    let pts: Vec<f64> = (1..=checkpoints).map(|i| start + (to - start) * i as f64 / checkpoints as f64).collect();
    let mut edges = vec![start];
    edges.extend(&pts);
    let pieces: Vec<f64> = edges.par_windows(2).map(|w| integrate_with_breaks(integrand, w[0], w[1], &br, 1)).collect();
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(checkpoints);
    for (x, p) in pts.into_iter().zip(pieces) {
        acc += p;
        if !acc.is_finite() {
            return Err(Error::Quadrature { lo: start.min(x), hi: start.max(x), reason: "non-finite variational integrand".into() });
        }
        out.push((x, acc));
    }
    Ok(out)
}

/// The four variational inequalities: for each cut, the cumulative integral
/// from its left end run leftward to `-T` and rightward to `T`, with
/// `T = 10 max|endpoint|`.
pub fn check_variational(s: &Sheets, checkpoints: usize) -> Result<Vec<CheckRecord>> {
    let t = 10.0 * s.branch.max_abs_endpoint();
    let mut out = Vec::new();
    for j in 1..=2 {
        let [lo, _] = s.branch.cut(j);
        for (dir, to) in [("left", -t), ("right", t)] {
            let vals = variational_integral(s, j, lo, to, checkpoints)?;
            let (worst, at) = argmax(vals.iter().map(|&(x, c)| (c, x)));
            out.push(
                CheckRecord::new(
                    format!("variational_{}_{dir}", cut_name(j)),
                    format!("{checkpoints} checkpoints from {lo} to {to}"),
                    worst,
                    at,
                    "< 0",
                    worst < 0.0,
                )
                .with_detail(format!("truncated at {to}")),
            );
        }
    }
    Ok(out)
}

/// Jump phase `theta_j = -i (g_j^+ - g_j^-)` on `grid` interior points; it
/// must decrease from left to right. `worst` is the largest increment.
pub fn check_jump_phase(g: &GFunctions, j: usize, grid: usize) -> Result<CheckRecord> {
    let [lo, hi] = g.sheets.branch.cut(j);
    let xs = interior(lo, hi, grid);
    let theta = xs
        .par_iter()
        .map(|&x| Ok(((g.g_real(j, x, Side::Plus)? - g.g_real(j, x, Side::Minus)?) * C::new(0.0, -1.0)).re))
        .collect::<Result<Vec<f64>>>()?;
    let (worst, at) = argmax(theta.windows(2).zip(&xs).map(|(w, &x)| (w[1] - w[0], x)));
    Ok(CheckRecord::new(
        format!("jump_phase_{}", cut_name(j)),
        format!("{grid} midpoints of {}", cut_name(j)),
        worst,
        at,
        "< 0",
        worst < 0.0,
    )
    .with_detail(format!("theta from {} to {}", theta[0], theta[grid - 1])))
}

/// Log-log fit of a power law near one endpoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeFit {
    pub endpoint: f64,
    pub cut: usize,
    pub distances: Vec<f64>,
    pub values: Vec<f64>,
    pub slope: f64,
    pub integrated_values: Vec<f64>,
    pub integrated_slope: f64,
}

fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Fits `-Im f_j^+` and its integral from the endpoint against the distance
/// `d = 10^-k (cut length)`, `k = 2, 2.5, ..., 5`.
pub fn edge_fit(s: &Sheets, endpoint: usize) -> Result<EdgeFit> {
    let e = s.branch.endpoints()[endpoint];
    let j = endpoint / 2 + 1;
    let [lo, hi] = s.branch.cut(j);
    let len = hi - lo;
    let dir = if endpoint.is_multiple_of(2) { 1.0 } else { -1.0 };
    let distances: Vec<f64> = (0..7).map(|i| len * 10f64.powf(-2.0 - 0.5 * i as f64)).collect();
    let jump = |x: f64| s.boundary(x, Side::Plus).map(|v| -v.f(j).im).unwrap_or(f64::NAN);
    let values: Vec<f64> = distances.iter().map(|&d| jump(e + dir * d)).collect();
    let integrated_values: Vec<f64> =
        distances.iter().map(|&d| integrate(jump, e, e + dir * d, if dir > 0.0 { Ends::LO } else { Ends::HI }, 1) * dir).collect();
    if values.iter().chain(&integrated_values).any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::EdgeFit { endpoint: e });
    }
    let ld: Vec<f64> = distances.iter().map(|d| d.ln()).collect();
    let lv: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let li: Vec<f64> = integrated_values.iter().map(|v| v.ln()).collect();
    Ok(EdgeFit {
        endpoint: e,
        cut: j,
        slope: ls_slope(&ld, &lv),
        integrated_slope: ls_slope(&ld, &li),
        distances,
        values,
        integrated_values,
    })
}

/// Edge exponent records for all four endpoints: the jump slope and the
/// slope of its integral.
pub fn check_edge_exponents(s: &Sheets, tol: &Tolerances) -> Vec<CheckRecord> {
    let names = ["I1_left", "I1_right", "I2_left", "I2_right"];
    let fits: Vec<Result<EdgeFit>> = (0..4).into_par_iter().map(|k| edge_fit(s, k)).collect();
    let mut out = Vec::new();
    for (k, fit) in fits.into_iter().enumerate() {
        match fit {
            Ok(f) => {
                let grid = "distances 10^-k cut length, k = 2..5 in half steps".to_string();
                let [lo, hi] = tol.exponent;
                out.push(CheckRecord::new(
                    format!("edge_exponent_{}", names[k]),
                    &grid,
                    f.slope,
                    f.endpoint,
                    format!("in [{lo}, {hi}]"),
                    f.slope >= lo && f.slope <= hi,
                ));
                let [lo, hi] = tol.integrated_exponent;
                out.push(CheckRecord::new(
                    format!("edge_integrated_exponent_{}", names[k]),
                    grid,
                    f.integrated_slope,
                    f.endpoint,
                    format!("in [{lo}, {hi}]"),
                    f.integrated_slope >= lo && f.integrated_slope <= hi,
                ));
            }
            Err(e) => {
                out.push(CheckRecord::failed(format!("edge_exponent_{}", names[k]), &e));
                out.push(CheckRecord::failed(format!("edge_integrated_exponent_{}", names[k]), &e));
            }
        }
    }
    out
}

/// `H2 = f1^2 + f1 f2 + f2^2 - f1 V1' - f2 V2'`
pub fn h2(curve: &SpectralCurve, v: &SheetValues) -> C {
    let (p1, p2) = (curve.vj_prime(1, v.z), curve.vj_prime(2, v.z));
    v.f1 * v.f1 + v.f1 * v.f2 + v.f2 * v.f2 - v.f1 * p1 - v.f2 * p2
}

/// `H3 = f1 f2 (f1 + f2) - V1' f1 (V1' - f1) - V2' f2 (V2' - f2)`
pub fn h3(curve: &SpectralCurve, v: &SheetValues) -> C {
    let (p1, p2) = (curve.vj_prime(1, v.z), curve.vj_prime(2, v.z));
    v.f1 * v.f2 * (v.f1 + v.f2) - p1 * v.f1 * (p1 - v.f1) - p2 * v.f2 * (p2 - v.f2)
}

/// The polynomial `H2` must equal: `-a^2 - c1(z)`.
pub fn h2_expected(curve: &SpectralCurve, z: C) -> C {
    -curve.a * curve.a - curve.c1.eval_complex(z)
}

/// The polynomial `H3` must equal: `-2 a^2 c2 - c2 c1 - c0`.
pub fn h3_expected(curve: &SpectralCurve, z: C) -> C {
    let (c2, c1, c0) = curve.coeffs_at(z);
    -2.0 * curve.a * curve.a * c2 - c2 * c1 - c0
}

fn h_scales(curve: &SpectralCurve) -> (i32, i32) {
    let d2 = curve.c1.degree().max(2) as i32;
    let d3 = (curve.c2.degree() + curve.c1.degree()).max(3) as i32;
    (d2, d3)
}

/// Seeded test points: 40 in the box `|Re|, |Im| <= 2 max|endpoint|` and 10
/// within `1e-3` of the cuts, off the real axis.
pub fn entirety_points(branch: &BranchStructure, seed: u64, count: usize) -> Vec<C> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = 2.0 * branch.max_abs_endpoint();
    let near = count / 5;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        if i < count - near {
            let re = rng.random_range(-r..r);
            let im = rng.random_range(0.01 * r..r) * sign;
            out.push(C::new(re, im));
        } else {
            let [lo, hi] = branch.cut(1 + i % 2);
            let re = rng.random_range(lo..hi);
            let im = rng.random_range(1e-4..1e-3) * sign;
            out.push(C::new(re, im));
        }
    }
    out
}

/// Pointwise `H2`, `H3` identities at seeded points and their jumps across
/// both cuts.
pub fn check_entirety(s: &Sheets, seed: u64, count: usize, grid: usize, tol: f64) -> Result<Vec<CheckRecord>> {
    let curve = &s.curve;
    let (d2, d3) = h_scales(curve);
    let zs = entirety_points(&s.branch, seed, count);
    let vals = zs
        .par_iter()
        .map(|&z| {
            let v = s.label(z)?;
            let e2 = (h2(curve, &v) - h2_expected(curve, z)).norm() / (1.0 + z.norm().powi(d2));
            let e3 = (h3(curve, &v) - h3_expected(curve, z)).norm() / (1.0 + z.norm().powi(d3));
            Ok((e2, e3, z))
        })
        .collect::<Result<Vec<_>>>()?;
    let (w2, at2) = argmax(vals.iter().map(|&(e, _, z)| (e, At::from(z))).map(|(e, a)| (e, Some(a))));
    let (w3, at3) = argmax(vals.iter().map(|&(_, e, z)| (e, Some(At::from(z)))));
    let grid_desc = format!("{count} seeded points (seed {seed}), {} within 1e-3 of the cuts", count / 5);
    let mut out = vec![
        CheckRecord::new("entirety_h2_identity", &grid_desc, w2, at2.unwrap(), format!("<= {tol:e} (1 + |z|^{d2})"), w2 <= tol),
        CheckRecord::new("entirety_h3_identity", &grid_desc, w3, at3.unwrap(), format!("<= {tol:e} (1 + |z|^{d3})"), w3 <= tol),
    ];
    let mut jumps2 = Vec::new();
    let mut jumps3 = Vec::new();
    for j in 1..=2 {
        let [lo, hi] = s.branch.cut(j);
        let xs = interior(lo, hi, grid);
        let v = xs
            .par_iter()
            .map(|&x| {
                let p = s.boundary(x, Side::Plus)?;
                let m = s.boundary(x, Side::Minus)?;
                Ok(((h2(curve, &p) - h2(curve, &m)).norm(), (h3(curve, &p) - h3(curve, &m)).norm(), x))
            })
            .collect::<Result<Vec<_>>>()?;
        jumps2.extend(v.iter().map(|&(e, _, x)| (e, x)));
        jumps3.extend(v.iter().map(|&(_, e, x)| (e, x)));
    }
    let (w, at) = argmax(jumps2);
    out.push(CheckRecord::new("entirety_h2_jump", format!("{grid} midpoints of each cut"), w, at, format!("<= {tol:e}"), w <= tol));
    let (w, at) = argmax(jumps3);
    out.push(CheckRecord::new("entirety_h3_jump", format!("{grid} midpoints of each cut"), w, at, format!("<= {tol:e}"), w <= tol));
    Ok(out)
}

/// Runs every check on a solved curve. `params` adds the quartic-only
/// records; checks that error become failing records.
pub fn curve_report(
    curve: &SpectralCurve,
    branch: &BranchStructure,
    params: Option<&QuarticParameters>,
    tol: &Tolerances,
    seed: u64,
) -> VerificationReport {
    let mut report = VerificationReport {
        a: curve.a,
        alpha: params.map(|p| p.alpha),
        beta: params.map(|p| p.beta),
        gamma1: Some(branch.gamma1),
        gamma2: Some(branch.gamma2),
        field: curve.field,
        tolerances: tol.clone(),
        seed,
        checks: Vec::new(),
        pass: false,
    };
    let sheets = match Sheets::new(curve, branch) {
        Ok(s) => s,
        Err(e) => {
            report.checks.push(CheckRecord::failed("sheet_labeling", &e));
            report.checks.extend(CHECK_NAMES.iter().map(|n| CheckRecord::skipped(*n, "sheet labeling failed")));
            return report;
        }
    };
    report.checks = run_checks(&sheets, params, tol, seed);
    report.pass = report.checks.iter().all(|c| c.pass);
    report
}

/// Names of the curve-level records, in report order.
pub const CHECK_NAMES: &[&str] = &[
    "boundary_relation_I1",
    "boundary_relation_I2",
    "measure_sign_I1",
    "measure_sign_I2",
    "variational_I1_left",
    "variational_I1_right",
    "variational_I2_left",
    "variational_I2_right",
    "jump_phase_I1",
    "jump_phase_I2",
    "edge_exponent_I1_left",
    "edge_integrated_exponent_I1_left",
    "edge_exponent_I1_right",
    "edge_integrated_exponent_I1_right",
    "edge_exponent_I2_left",
    "edge_integrated_exponent_I2_left",
    "edge_exponent_I2_right",
    "edge_integrated_exponent_I2_right",
    "entirety_h2_identity",
    "entirety_h3_identity",
    "entirety_h2_jump",
    "entirety_h3_jump",
    "g_constancy_I1",
    "g_outside_I1",
    "g_constancy_I2",
    "g_outside_I2",
    "mass_I1",
    "mass_I2",
    "total_mass",
];

/// Default seed for the random entirety test points.
pub const DEFAULT_SEED: u64 = 0;

type Job<'a> = Box<dyn Fn() -> Vec<CheckRecord> + Send + Sync + 'a>;

fn or_fail(names: &[&str], r: Result<Vec<CheckRecord>>) -> Vec<CheckRecord> {
    r.unwrap_or_else(|e| names.iter().map(|n| CheckRecord::failed(*n, &e)).collect())
}

fn run_checks(s: &Sheets, params: Option<&QuarticParameters>, tol: &Tolerances, seed: u64) -> Vec<CheckRecord> {
    let one = |name: &'static str, r: Result<CheckRecord>| or_fail(&[name], r.map(|c| vec![c]));
    let g = GFunctions::new(s);
    let mut jobs: Vec<Job> = Vec::new();
    for j in 1..=2 {
        jobs.push(Box::new(move || one(CHECK_NAMES[j - 1], check_boundary_relation(s, j, 200, tol.boundary))));
    }
    for j in 1..=2 {
        jobs.push(Box::new(move || one(CHECK_NAMES[1 + j], check_measure_sign(s, j, 200, tol.sign, tol.sign_clearance))));
    }
    jobs.push(Box::new(|| or_fail(&CHECK_NAMES[4..8], check_variational(s, 100))));
    let g = &g;
    for j in 1..=2 {
        jobs.push(Box::new(move || match g {
            Ok(g) => one(CHECK_NAMES[7 + j], check_jump_phase(g, j, 100)),
            Err(e) => vec![CheckRecord::failed(CHECK_NAMES[7 + j], e)],
        }));
    }
    jobs.push(Box::new(|| check_edge_exponents(s, tol)));
    jobs.push(Box::new(|| or_fail(&CHECK_NAMES[18..22], check_entirety(s, seed, 50, 200, tol.entirety))));
    for j in 1..=2 {
        jobs.push(Box::new(move || {
            let names = [CHECK_NAMES[20 + 2 * j], CHECK_NAMES[21 + 2 * j]];
            let g = match g {
                Ok(g) => g,
                Err(e) => return names.iter().map(|n| CheckRecord::failed(*n, e)).collect(),
            };
            match check_g_conditions(g, j, 100) {
                Ok(c) => vec![
                    CheckRecord::new(
                        names[0],
                        format!("100 midpoints of {}", cut_name(j)),
                        c.constancy_dev,
                        c.constancy_at,
                        format!("<= {:e}", tol.constancy),
                        c.constancy_dev <= tol.constancy,
                    )
                    .with_detail(format!("ell = {}, Im Phi = {}", c.ell, c.phi_imag)),
                    CheckRecord::new(
                        names[1],
                        format!("200 points off {} within +-{}", cut_name(j), c.truncation),
                        c.outside_margin,
                        c.outside_at,
                        "< 0",
                        c.outside_margin < 0.0,
                    ),
                ],
                Err(e) => names.iter().map(|n| CheckRecord::failed(*n, &e)).collect(),
            }
        }));
    }
    jobs.push(Box::new(|| match profile(s, 200) {
        Ok(p) => {
            let mut out: Vec<CheckRecord> = (1..=2)
                .map(|j| {
                    let dev = (p.masses[j - 1] - s.curve.x(j)).abs();
                    CheckRecord::new(
                        CHECK_NAMES[25 + j],
                        "200 Chebyshev points per cut",
                        dev,
                        s.branch.cut(j)[0],
                        format!("<= {:e}", tol.mass),
                        dev <= tol.mass,
                    )
                    .with_detail(format!("mass {}", p.masses[j - 1]))
                })
                .collect();
            let dev = (p.total_mass - 1.0).abs();
            out.push(
                CheckRecord::new("total_mass", "200 Chebyshev points per cut", dev, 0.0, format!("<= {:e}", tol.mass), dev <= tol.mass)
                    .with_detail(format!("mass {}", p.total_mass)),
            );
            out
        }
        Err(e) => CHECK_NAMES[26..29].iter().map(|n| CheckRecord::failed(*n, &e)).collect(),
    }));
    if let Some(p) = params {
        jobs.push(Box::new(move || quartic_checks(s, p, tol)));
    }
    jobs.par_iter().map(|f| f()).collect::<Vec<_>>().into_iter().flatten().collect()
}

fn quartic_checks(s: &Sheets, p: &QuarticParameters, tol: &Tolerances) -> Vec<CheckRecord> {
    let mut out = vec![CheckRecord::new(
        "discriminant_factorization",
        "square part of q(t)",
        s.branch.factor_residual,
        s.branch.gamma2,
        format!("<= {:e}", tol.factorization),
        s.branch.factor_residual <= tol.factorization,
    )
    .with_detail(format!("critical point found in {} Newton steps, |grad| = {:e}", p.iterations, p.grad_norm))];
    out.push(match profile(s, 200) {
        Ok(pr) => {
            let n = pr.xs.len();
            let (worst, at) = argmax((0..n).map(|i| ((pr.rho[i] - pr.rho[n - 1 - i]).abs(), pr.xs[i])));
            CheckRecord::new(
                "density_symmetry",
                "200 Chebyshev points per cut",
                worst,
                at,
                format!("<= {:e}", tol.symmetry),
                worst <= tol.symmetry,
            )
        }
        Err(e) => CheckRecord::failed("density_symmetry", &e),
    });
    out
}

/// Solves the symmetric quartic at `a` and verifies it. Solver or
/// classification failures produce a failing report with the remaining
/// checks marked skipped.
pub fn full_report(a: f64, solve_tol: f64, tol: &Tolerances, seed: u64) -> VerificationReport {
    match solve_parameters(a, solve_tol).and_then(|(p, br)| Ok((quartic_curve(a, p.alpha, p.beta)?, p, br))) {
        Ok((curve, p, br)) => curve_report(&curve, &br, Some(&p), tol, seed),
        Err(e) => {
            let mut checks = vec![CheckRecord::failed("solve_parameters", &e)];
            checks.extend(CHECK_NAMES.iter().map(|n| CheckRecord::skipped(*n, "no admissible parameters")));
            VerificationReport {
                a,
                alpha: None,
                beta: None,
                gamma1: None,
                gamma2: None,
                field: FieldKind::Quartic,
                tolerances: tol.clone(),
                seed,
                checks,
                pass: false,
            }
        }
    }
}

/// Verifies the Gaussian curve with source fractions `(1 - x2, x2)`.
pub fn gaussian_report(a: f64, x2: f64, tol: &Tolerances, seed: u64) -> Result<VerificationReport> {
    let curve = crate::curve::gaussian_curve(a, x2)?;
    let br = branch_structure(&curve, 1e-6)?;
    Ok(curve_report(&curve, &br, None, tol, seed))
}

/// Outcome of solving and classifying at one `a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbePoint {
    pub a: f64,
    pub solved: bool,
    pub detail: String,
}

/// Bisects for the smallest `a` in `[lo, hi]` where the quartic solver and
/// branch classification succeed, assuming failure at `lo` and success at
/// `hi`. Returns the bracket and every probe made.
pub fn probe_threshold(lo: f64, hi: f64, steps: usize, tol: f64) -> ([f64; 2], Vec<ProbePoint>) {
    let probe = |a: f64| match solve_parameters(a, tol) {
        Ok((p, br)) => ProbePoint { a, solved: true, detail: format!("alpha {} beta {} gamma2 {}", p.alpha, p.beta, br.gamma2) },
        Err(e) => ProbePoint { a, solved: false, detail: e.to_string() },
    };
    let mut trace = vec![probe(lo), probe(hi)];
    let (mut lo, mut hi) = (lo, hi);
    if trace[0].solved || !trace[1].solved {
        return ([lo, hi], trace);
    }
    for _ in 0..steps {
        let mid = (lo * hi).sqrt();
        let p = probe(mid);
        if p.solved {
            hi = mid;
        } else {
            lo = mid;
        }
        trace.push(p);
    }
    ([lo, hi], trace)
}
