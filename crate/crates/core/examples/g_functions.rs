//! Evaluates the logarithmic potentials of the two cut measures, checks the
//! equality and inequality conditions, and compares with log z far away.
//!
//! cargo run --release --example g_functions -- 10

use num_complex::Complex64 as C;
use spectral_curve::curve::quartic_curve;
use spectral_curve::density::{check_g_conditions, GFunctions};
use spectral_curve::params::solve_parameters;
use spectral_curve::sheets::Sheets;

fn main() -> spectral_curve::Result<()> {
    let a: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10.0);
    let (p, br) = solve_parameters(a, 1e-12)?;
    let sheets = Sheets::new(&quartic_curve(a, p.alpha, p.beta)?, &br)?;
    let g = GFunctions::new(&sheets)?;
    for j in 1..=2 {
        let c = check_g_conditions(&g, j, 200)?;
        println!(
            "g{j}: ell {:.6}  Im Phi {:.6}  constancy {:.1e}  outside margin {:.3e}",
            c.ell, c.phi_imag, c.constancy_dev, c.outside_margin
        );
    }
    for scale in [10.0, 100.0] {
        let z = C::new(0.0, scale * br.gamma2);
        for j in 1..=2 {
            println!("|g{j} - log z| at {z:.1}: {:.3e}", (g.g(j, z)? - z.ln()).norm());
        }
    }
    Ok(())
}
