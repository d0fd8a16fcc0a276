//! Samples random parameter triples and compares the resultant of the
//! factored discriminant with two candidate polynomial products.
//!
//! cargo run --release --example resultant_identity

use spectral_curve::params::{identity_sweep, RESULTANT_CONSTANT};

fn main() -> spectral_curve::Result<()> {
    let s = identity_sweep(30, 1)?;
    println!("points {}  skipped {}", s.points, s.skipped);
    println!("Res / (B1 B2):          kappa {:.6e}  max relative deviation {:.3e}", s.kappa, s.max_rel_dev);
    println!("Res / (a^2 B1^3 B2):    kappa {:.6e}  max relative deviation {:.3e}", s.corrected_kappa, s.corrected_max_rel_dev);
    println!("closed-form constant    {RESULTANT_CONSTANT:.6e}");
    Ok(())
}
