//! Samples source-plus-GUE spectra and compares them with the curve density.
//!
//! cargo run --release --example mc_compare -- 2.0

use spectral_curve::curve::gaussian_curve;
use spectral_curve::density::profile;
use spectral_curve::mc::{cluster_edges, compare_histogram, reflection_distance, sample_spectrum_gaussian, McConfig};
use spectral_curve::sheets::{branch_structure, Sheets};

fn main() -> spectral_curve::Result<()> {
    let a: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2.0);
    let cfg = McConfig { n: 400, samples: 100, seed: 7, bins: 80 };
    let curve = gaussian_curve(a, 0.5)?;
    let branch = branch_structure(&curve, 1e-6)?;
    let sheets = Sheets::new(&curve, &branch)?;
    let prof = profile(&sheets, 400)?;

    let start = std::time::Instant::now();
    let batch = sample_spectrum_gaussian(&cfg, a)?;
    println!("sampled {} x {} in {:.1?}", cfg.samples, cfg.n, start.elapsed());

    let cmp = compare_histogram(&batch, &prof, cfg.bins);
    println!("cdf sup distance {:.4} at {:.3}", cmp.cdf_sup_distance, cmp.cdf_sup_at);
    println!("worst bin density gap {:.4}", cmp.per_bin_max);
    println!("cluster edges {:?}", cluster_edges(&batch));
    println!("branch points {:?}", branch.endpoints());
    println!("reflection distance {:.4}", reflection_distance(&batch));
    Ok(())
}
