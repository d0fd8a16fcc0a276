//! Solves for the quartic-field parameters over a range of source strengths
//! and prints the rescaled values and the Hessian classification.
//!
//! cargo run --release --example quartic_solve

use spectral_curve::params::solve_parameters;

fn main() -> spectral_curve::Result<()> {
    println!("{:>6} {:>14} {:>14} {:>10} {:>10} {:>12} {:>12} {:>9}", "a", "alpha", "beta", "u", "v", "gamma1", "gamma2", "local max");
    for a in [5.0, 10.0, 20.0, 50.0, 100.0] {
        let (p, br) = solve_parameters(a, 1e-12)?;
        println!(
            "{a:>6} {:>14.6} {:>14.6} {:>10.6} {:>10.6} {:>12.6} {:>12.6} {:>9}",
            p.alpha,
            p.beta,
            p.u(),
            p.v(),
            br.gamma1,
            br.gamma2,
            p.is_local_max(a)
        );
    }
    Ok(())
}
