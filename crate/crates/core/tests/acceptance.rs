//! Acceptance criteria 1-11, one test each. Every test writes one
//! `criterion N ... PASS|FAIL` line to stderr, uncaptured, then asserts.

use std::io::Write;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C;
use spectral_curve::curve::{gaussian_curve, quartic_curve};
use spectral_curve::density::{check_g_conditions, profile, GFunctions};
use spectral_curve::mc::{cluster_edges, compare_histogram, sample_spectrum_gaussian, McConfig};
use spectral_curve::params::{identity_sweep, solve_parameters, QuarticParameters};
use spectral_curve::poly::roots;
use spectral_curve::sheets::{branch_structure, discriminant_t, Sheets};
use spectral_curve::verify::{boundary_residual, check_entirety, check_measure_sign, check_variational, edge_fit, DEFAULT_SEED};

// pinned tolerances
const RESULTANT_REL: f64 = 1e-6;
const RESULTANT_POINTS: usize = 100;
const RESULTANT_SEED: u64 = 1;
const RESULTANT_TIME: Duration = Duration::from_secs(10);
const NEWTON_STEPS: usize = 30;
const EXPANSION_TIME: Duration = Duration::from_secs(5);
const HESSIAN_BAND: [f64; 2] = [0.8, 1.25];
const FACTOR_REL: f64 = 1e-6;
const GAMMA2_SLACK: f64 = 5.0;
const BOUNDARY_ABS: f64 = 1e-10;
const BOUNDARY_GRID: usize = 200;
const SIGN_MARGIN: f64 = 1e-6;
const SIGN_CLEARANCE: f64 = 0.01;
const VARIATIONAL_CHECKPOINTS: usize = 100;
const EXPONENT_BAND: [f64; 2] = [0.45, 0.55];
const ENTIRETY_ABS: f64 = 1e-8;
const ENTIRETY_POINTS: usize = 50;
const MASS_ABS: f64 = 1e-6;
const SYMMETRY_ABS: f64 = 1e-10;
const G_DECAY_ABS: f64 = 1e-3;
const CONSTANCY_ABS: f64 = 1e-6;
const MC_CDF: f64 = 0.02;
const MC_EDGE: f64 = 0.1;
const MC_TIME: Duration = Duration::from_secs(300);
const MC_CONFIG: McConfig = McConfig { n: 400, samples: 100, seed: 7, bins: 80 };

fn line(n: usize, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "criterion {n:>2} {name}: {verdict} ({detail})");
}

fn quartic(a: f64) -> (QuarticParameters, Sheets) {
    let (p, br) = solve_parameters(a, 1e-12).expect("quartic solve");
    let s = Sheets::new(&quartic_curve(a, p.alpha, p.beta).unwrap(), &br).unwrap();
    (p, s)
}

fn quartic10() -> &'static (QuarticParameters, Sheets) {
    static Q: OnceLock<(QuarticParameters, Sheets)> = OnceLock::new();
    Q.get_or_init(|| quartic(10.0))
}

#[test]
fn criterion_01_resultant_identity() {
    let start = Instant::now();
    let sweep = identity_sweep(RESULTANT_POINTS, RESULTANT_SEED).unwrap();
    let took = start.elapsed();
    let pass = sweep.max_rel_dev <= RESULTANT_REL && took < RESULTANT_TIME && sweep.skipped == 0;
    line(
        1,
        "resultant identity Res(q, q') = kappa B1 B2",
        pass,
        &format!(
            "{} points, kappa {:e}, max rel dev {:.3e} (bound {RESULTANT_REL:e}), {:.2?}; with a^2 B1^3 B2 in place of B1 B2: kappa {:e}, max rel dev {:.3e}",
            sweep.points, sweep.kappa, sweep.max_rel_dev, took, sweep.corrected_kappa, sweep.corrected_max_rel_dev
        ),
    );
    assert!(pass, "Res(q, q') / (B1 B2) is not constant: max rel dev {:e}", sweep.max_rel_dev);
}

#[test]
fn criterion_02_parameter_expansions() {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = Vec::new();
    for a in [5.0f64, 10.0, 20.0, 50.0] {
        let (p, _) = solve_parameters(a, 1e-12).unwrap();
        let bound = a.powf(-8.0 / 3.0);
        let du = (p.alpha / (a * a) - (-1.0 + a.powf(-4.0 / 3.0))).abs();
        let dv = (p.beta / a.powf(4.0 / 3.0) - (1.0 - a.powf(-4.0 / 3.0) / 3.0)).abs();
        let ok = p.iterations <= NEWTON_STEPS && du <= bound && dv <= bound;
        pass &= ok;
        detail.push(format!("a={a}: {} steps, |du| {du:.2e} |dv| {dv:.2e} <= {bound:.2e}", p.iterations));
    }
    let took = start.elapsed();
    pass &= took < EXPANSION_TIME;
    line(2, "parameter expansions", pass, &format!("{}; {took:.2?}", detail.join("; ")));
    assert!(pass);
}

#[test]
fn criterion_03_hessian_scale() {
    let mut detail = Vec::new();
    let mut ratios = Vec::new();
    for a in [20.0f64, 50.0] {
        let (p, _) = solve_parameters(a, 1e-12).unwrap();
        let r = p.hessian_ratio();
        let rescaled = p.hessian_det_rescaled.abs() / (4782969.0 * a.powf(80.0 / 3.0));
        ratios.push(r);
        detail.push(format!("a={a}: ratio {r:.4e}, in (alpha/a^2, beta/a^(4/3)) units {rescaled:.4}, local max {}", p.is_local_max(a)));
    }
    let in_band = ratios.iter().all(|r| (HESSIAN_BAND[0]..=HESSIAN_BAND[1]).contains(r));
    let trending = (ratios[1] - 1.0).abs() <= (ratios[0] - 1.0).abs();
    let pass = in_band && trending;
    line(3, "Hessian scale |det Hess B2| / (3^14 a^(80/3))", pass, &detail.join("; "));
    assert!(pass, "ratios {ratios:?} outside {HESSIAN_BAND:?}");
}

#[test]
fn criterion_04_branch_structure() {
    let mut pass = true;
    let mut detail = Vec::new();
    for a in [10.0f64, 20.0, 50.0] {
        let (p, br) = solve_parameters(a, 1e-12).unwrap();
        let q = discriminant_t(&quartic_curve(a, p.alpha, p.beta).unwrap());
        let rs = roots(&q, 1e-6).unwrap();
        let scale = |r: &C| 1e-7 * (1.0 + r.norm());
        let simple_pos = rs.roots.iter().zip(&rs.multiplicities).filter(|(r, &m)| m == 1 && r.im.abs() <= scale(r) && r.re > 0.0).count();
        let double_upper = rs.roots.iter().zip(&rs.multiplicities).filter(|(r, &m)| m == 2 && r.im > scale(r)).count();
        let double_lower = rs.roots.iter().zip(&rs.multiplicities).filter(|(r, &m)| m == 2 && r.im < -scale(r)).count();
        let shape = simple_pos == 2 && double_upper == 1 && double_lower == 1 && rs.roots.len() == 4;
        let g2 = a.powf(2.0 / 3.0) * (1.0 + 2.0 * (2.0f64 / 3.0).sqrt() * a.powf(-2.0 / 3.0));
        let dev = (br.gamma2 * br.gamma2 - g2).abs();
        let slack = GAMMA2_SLACK * a.powf(-2.0 / 3.0);
        let ok = shape && br.factor_residual <= FACTOR_REL && dev <= slack;
        pass &= ok;
        detail.push(format!(
            "a={a}: {simple_pos} simple positive, {double_upper}+{double_lower} double non-real, factor residual {:.1e}, |gamma2^2 - approx| {dev:.3} <= {slack:.3}",
            br.factor_residual
        ));
    }
    line(4, "branch structure", pass, &detail.join("; "));
    assert!(pass);
}

#[test]
fn criterion_05_boundary_relations() {
    let (_, s) = quartic10();
    let mut worst: f64 = 0.0;
    for j in 1..=2 {
        let [lo, hi] = s.branch.cut(j);
        for i in 0..BOUNDARY_GRID {
            let x = lo + (hi - lo) * (i as f64 + 0.5) / BOUNDARY_GRID as f64;
            worst = worst.max(boundary_residual(s, j, x).unwrap());
        }
    }
    let pass = worst <= BOUNDARY_ABS;
    line(
        5,
        "boundary relations, a = 10",
        pass,
        &format!("max residual {worst:.3e} over {BOUNDARY_GRID} points per cut, bound {BOUNDARY_ABS:e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_06_signs() {
    let (_, s) = quartic10();
    let mut pass = true;
    let mut detail = Vec::new();
    for j in 1..=2 {
        let r = check_measure_sign(s, j, 200, SIGN_MARGIN, SIGN_CLEARANCE).unwrap();
        pass &= r.pass;
        detail.push(format!("max 2 Im f{j}+ {:.4}", r.worst.unwrap()));
    }
    for r in check_variational(s, VARIATIONAL_CHECKPOINTS).unwrap() {
        pass &= r.pass;
        detail.push(format!("{} margin {:.4}", r.name, -r.worst.unwrap()));
    }
    line(6, "measure sign and variational inequalities", pass, &detail.join("; "));
    assert!(pass);
}

#[test]
fn criterion_07_edge_exponents() {
    let (_, s) = quartic10();
    let slopes: Vec<f64> = (0..4).map(|k| edge_fit(s, k).unwrap().slope).collect();
    let pass = slopes.iter().all(|v| (EXPONENT_BAND[0]..=EXPONENT_BAND[1]).contains(v));
    line(7, "edge exponents, a = 10", pass, &format!("slopes {slopes:.4?} in {EXPONENT_BAND:?}"));
    assert!(pass);
}

#[test]
fn criterion_08_entirety() {
    let (_, s) = quartic10();
    let recs = check_entirety(s, DEFAULT_SEED, ENTIRETY_POINTS, 200, ENTIRETY_ABS).unwrap();
    let pass = recs.iter().all(|r| r.pass);
    let detail: Vec<String> = recs.iter().map(|r| format!("{} {:.2e}", r.name, r.worst.unwrap())).collect();
    line(8, "entirety of H2 and H3", pass, &format!("{}; bound {ENTIRETY_ABS:e}", detail.join("; ")));
    assert!(pass);
}

#[test]
fn criterion_09_density() {
    let (_, s) = quartic10();
    let p = profile(s, 400).unwrap();
    let mass_ok = (p.total_mass - 1.0).abs() <= MASS_ABS && p.masses.iter().all(|m| (m - 0.5).abs() <= MASS_ABS);
    let n = p.xs.len();
    let sym = (0..n).map(|i| (p.rho[i] - p.rho[n - 1 - i]).abs()).fold(0.0, f64::max);
    let sym_ok = sym <= SYMMETRY_ABS;
    let g = GFunctions::new(s).unwrap();
    let z = 100.0 * s.branch.gamma2;
    let decay: Vec<f64> = (1..=2).map(|j| (g.g(j, C::new(z, 0.0)).unwrap() - z.ln()).norm()).collect();
    let decay_ok = decay.iter().all(|d| *d <= G_DECAY_ABS);
    let conds: Vec<_> = (1..=2).map(|j| check_g_conditions(&g, j, 100).unwrap()).collect();
    let cond_ok = conds.iter().all(|c| c.constancy_dev <= CONSTANCY_ABS && c.outside_margin < 0.0);
    let pass = mass_ok && sym_ok && decay_ok && cond_ok;
    let detail = format!(
        "masses {:.12?} total {:.12} [{}]; symmetry {sym:.1e} [{}]; |g_j - log z| at 100 gamma2 {decay:.4?} vs {G_DECAY_ABS:e} [{}]; constancy {:.1e} {:.1e}, outside margins {:.4e} {:.4e} [{}]",
        p.masses,
        p.total_mass,
        ok(mass_ok),
        ok(sym_ok),
        ok(decay_ok),
        conds[0].constancy_dev,
        conds[1].constancy_dev,
        conds[0].outside_margin,
        conds[1].outside_margin,
        ok(cond_ok)
    );
    line(9, "density, masses and g-functions", pass, &detail);
    assert!(pass, "{detail}");
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "fail"
    }
}

#[test]
fn criterion_10_gaussian_monte_carlo() {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = Vec::new();
    for a in [2.0, 3.0] {
        let curve = gaussian_curve(a, 0.5).unwrap();
        let br = branch_structure(&curve, 1e-6).unwrap();
        let p = profile(&Sheets::new(&curve, &br).unwrap(), 400).unwrap();
        let batch = sample_spectrum_gaussian(&MC_CONFIG, a).unwrap();
        let cmp = compare_histogram(&batch, &p, MC_CONFIG.bins);
        let edges = cluster_edges(&batch);
        let edge_dev = edges.iter().zip(br.endpoints()).map(|(e, b)| (e - b).abs()).fold(0.0, f64::max);
        let ok = cmp.cdf_sup_distance <= MC_CDF && edge_dev <= MC_EDGE;
        pass &= ok;
        detail.push(format!("a={a}: cdf distance {:.4} (<= {MC_CDF}), edge deviation {edge_dev:.4} (<= {MC_EDGE})", cmp.cdf_sup_distance));
    }
    let took = start.elapsed();
    pass &= took <= MC_TIME;
    line(10, "Gaussian Monte Carlo", pass, &format!("{}; {took:.1?}", detail.join("; ")));
    assert!(pass);
}

fn cli(args: &[&str], out: &std::path::Path) -> Vec<u8> {
    let status = Command::new(env!("CARGO_BIN_EXE_spectral-curve")).args(args).arg("--out").arg(out).status().unwrap();
    assert!(status.code().is_some_and(|c| c == 0 || c == 1), "{args:?}: {status}");
    std::fs::read(out).unwrap()
}

#[test]
fn criterion_11_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 4] = [
        &["mc", "--a", "2", "--n", "400", "--samples", "100", "--seed", "7"],
        &["mc", "--a", "2", "--n", "60", "--samples", "10", "--seed", "7", "--format", "csv"],
        &["density", "--a", "10", "--grid", "400"],
        &["verify", "--a", "10", "--seed", "3"],
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for (i, args) in runs.iter().enumerate() {
        let a = cli(args, &dir.path().join(format!("{i}a")));
        let b = cli(args, &dir.path().join(format!("{i}b")));
        let same = a == b && !a.is_empty();
        pass &= same;
        detail.push(format!("{} {}: {} bytes {}", args[0], i, a.len(), if same { "identical" } else { "differ" }));
    }
    line(11, "determinism of repeated CLI runs", pass, &detail.join("; "));
    assert!(pass);
}
