//! Continues the three sheets along a horizontal line above the real axis
//! and prints the sheet values at a few stations.
//!
//! cargo run --release --example sheet_sweep -- 10

use num_complex::Complex64 as C;
use spectral_curve::curve::quartic_curve;
use spectral_curve::params::solve_parameters;
use spectral_curve::sheets::Sheets;

fn main() -> spectral_curve::Result<()> {
    let a: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10.0);
    let (p, br) = solve_parameters(a, 1e-12)?;
    let sheets = Sheets::new(&quartic_curve(a, p.alpha, p.beta)?, &br)?;
    let reach = 2.0 * br.gamma2;
    let path: Vec<C> = (0..=400).map(|k| C::new(-reach + 2.0 * reach * k as f64 / 400.0, 0.05 * br.gamma2)).collect();
    for v in sheets.trace(&path)?.iter().step_by(50) {
        println!(
            "z {:.3}  r1 {:.5}  r2 {:.5}  r3 {:.5}  residual {:.1e}",
            v.z,
            v.r1,
            v.r2,
            v.r3,
            v.residuals.iter().cloned().fold(0.0, f64::max)
        );
    }
    Ok(())
}
