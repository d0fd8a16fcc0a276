//! Bisects for the smallest source strength at which the quartic solver and
//! the two-cut classification succeed.
//!
//! cargo run --release --example threshold_probe

use spectral_curve::verify::probe_threshold;

fn main() {
    let (bracket, trace) = probe_threshold(0.1, 5.0, 20, 1e-12);
    for p in &trace {
        println!("a {:>10.6}  {}  {}", p.a, if p.solved { "solved" } else { "failed" }, p.detail);
    }
    println!("threshold in [{:.6}, {:.6}]", bracket[0], bracket[1]);
}
