//! Computes the equilibrium density on both cuts and prints masses, a coarse
//! profile and the cumulative distribution.
//!
//! cargo run --release --example density_profile -- 10

use spectral_curve::curve::quartic_curve;
use spectral_curve::density::profile;
use spectral_curve::params::solve_parameters;
use spectral_curve::sheets::Sheets;

fn main() -> spectral_curve::Result<()> {
    let a: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10.0);
    let (p, br) = solve_parameters(a, 1e-12)?;
    let sheets = Sheets::new(&quartic_curve(a, p.alpha, p.beta)?, &br)?;
    let prof = profile(&sheets, 200)?;
    println!("support {:?}", prof.support);
    println!("masses {:?} total {}", prof.masses, prof.total_mass);
    for (i, x) in prof.xs.iter().enumerate().step_by(25) {
        println!("x {x:>12.6}  rho {:>10.6}  cdf {:>8.6}", prof.rho[i], prof.cdf[i]);
    }
    Ok(())
}
