//! Runs every quartic-field check at one source strength and prints the
//! check table.
//!
//! cargo run --release --example verify_report -- 10

use spectral_curve::verify::{full_report, Tolerances, DEFAULT_SEED};

fn main() {
    let a: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10.0);
    let report = full_report(a, 1e-12, &Tolerances::default(), DEFAULT_SEED);
    for c in &report.checks {
        let worst = c.worst.map_or("-".to_string(), |w| format!("{w:.3e}"));
        println!("{:<36} {:>12} {:<24} {}", c.name, worst, c.bound, if c.pass { "ok" } else { "FAIL" });
    }
    println!("overall {}", if report.pass { "pass" } else { "fail" });
}
