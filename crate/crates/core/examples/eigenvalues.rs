//! Draws one source-plus-GUE matrix and prints a summary of its spectrum.
//!
//! cargo run --release --example eigenvalues -- 200 2.0

use spectral_curve::mc::{sample_rng, source_plus_gue};

fn main() -> spectral_curve::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(200);
    let a: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(2.0);
    let m = source_plus_gue(n, a, &mut sample_rng(3, 0));
    let ev = m.eigenvalues()?;
    let neg = ev.iter().filter(|&&x| x < 0.0).count();
    println!("n {n}  trace {:.6}  sum of eigenvalues {:.6}", m.trace(), ev.iter().sum::<f64>());
    println!("min {:.4}  max {:.4}  below zero {neg}", ev[0], ev[n - 1]);
    println!("gap around zero [{:.4}, {:.4}]", ev[neg - 1], ev[neg]);
    Ok(())
}
