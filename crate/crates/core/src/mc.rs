//! Monte Carlo spectra of `A + H`, with `A = diag(a, ..., a, -a, ..., -a)`
//! and `H` from the Gaussian unitary ensemble scaled by `1/n`, compared with
//! the density predicted by the Gaussian curve.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::ReferenceCdf;
use crate::eigen::HermitianMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub bins: usize,
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || !self.n.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!("n = {} must be a positive even integer", self.n)));
        }
        if self.samples == 0 {
            return Err(Error::InvalidArgument("samples must be positive".into()));
        }
        if self.bins == 0 {
            return Err(Error::InvalidArgument("bins must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumBatch {
    pub config: McConfig,
    pub a: f64,
    /// `n` sorted eigenvalues per sample, samples in order.
    pub eigenvalues: Vec<f64>,
}

impl SpectrumBatch {
    pub fn sample(&self, i: usize) -> &[f64] {
        let n = self.config.n;
        &self.eigenvalues[i * n..(i + 1) * n]
    }

    pub fn samples(&self) -> impl Iterator<Item = &[f64]> {
        self.eigenvalues.chunks(self.config.n)
    }

    /// All eigenvalues pooled and sorted.
    pub fn pooled(&self) -> Vec<f64> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// Generator for sample `i`: one ChaCha stream per sample, so results do not
/// depend on scheduling.
pub fn sample_rng(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

/// One matrix `diag(a 1_{n/2}, -a 1_{n/2}) + H` with `H_ii ~ N(0, 1/n)` and
/// `Re H_ij, Im H_ij ~ N(0, 1/(2n))`.
pub fn source_plus_gue<R: Rng>(n: usize, a: f64, rng: &mut R) -> HermitianMatrix {
    let sd_diag = (1.0 / n as f64).sqrt();
    let sd_off = (0.5 / n as f64).sqrt();
    let mut m = HermitianMatrix::zeros(n);
    for i in 0..n {
        for j in 0..i {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            m.set(i, j, Complex64::new(sd_off * re, sd_off * im));
        }
        let d: f64 = rng.sample(StandardNormal);
        let shift = if i < n / 2 { a } else { -a };
        m.set(i, i, Complex64::new(shift + sd_diag * d, 0.0));
    }
    m
}

/// Spectra of `cfg.samples` independent matrices, bitwise reproducible for a
/// fixed configuration regardless of thread count.
pub fn sample_spectrum_gaussian(cfg: &McConfig, a: f64) -> Result<SpectrumBatch> {
    cfg.validate()?;
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("a = {a} must be finite and non-negative")));
    }
    let spectra = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, i);
            source_plus_gue(cfg.n, a, &mut rng).eigenvalues().map_err(|_| Error::Eigen { sample: i })
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(SpectrumBatch { config: *cfg, a, eigenvalues: spectra.concat() })
}

/// Empirical distribution of a sorted sample.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        EmpiricalCdf { sorted: values }
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }
}

impl ReferenceCdf for EmpiricalCdf {
    fn cdf(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    fn cdf_left(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v < x) as f64 / self.sorted.len() as f64
    }
}

/// `sup |F_n - G|` for a sorted sample, checking both one-sided limits at
/// every jump of `F_n`. Returns the distance and where it is attained.
pub fn ks_distance<R: ReferenceCdf + ?Sized>(sorted: &[f64], reference: &R) -> (f64, f64) {
    let total = sorted.len() as f64;
    let mut best = (0.0, sorted.first().copied().unwrap_or(0.0));
    let mut i = 0;
    while i < sorted.len() {
        let x = sorted[i];
        let mut k = i;
        while k < sorted.len() && sorted[k] == x {
            k += 1;
        }
        let below = i as f64 / total;
        let at = k as f64 / total;
        let d = (below - reference.cdf_left(x)).abs().max((at - reference.cdf(x)).abs());
        if d > best.0 {
            best = (d, x);
        }
        i = k;
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub cdf_sup_distance: f64,
    /// Location of the largest CDF gap.
    pub cdf_sup_at: f64,
    /// Largest difference between histogram and reference bin densities.
    pub per_bin_max: f64,
    pub bins: usize,
    pub range: [f64; 2],
}

/// Compares a batch with a reference distribution: Kolmogorov distance and
/// the worst bin of a `bins`-bin equal-width histogram over the sample
/// range, bins taken as `(e_k, e_{k+1}]` with the first one closed.
pub fn compare_histogram<R: ReferenceCdf + ?Sized>(batch: &SpectrumBatch, reference: &R, bins: usize) -> Comparison {
    let sorted = batch.pooled();
    let (cdf_sup_distance, cdf_sup_at) = ks_distance(&sorted, reference);
    let lo = sorted[0];
    let hi = sorted[sorted.len() - 1];
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|k| if k == bins { hi } else { lo + width * k as f64 }).collect();
    let total = sorted.len() as f64;
    let mut per_bin_max: f64 = 0.0;
    for k in 0..bins {
        let (e0, e1) = (edges[k], edges[k + 1]);
        let count = if k == 0 {
            sorted.partition_point(|&v| v <= e1)
        } else {
            sorted.partition_point(|&v| v <= e1) - sorted.partition_point(|&v| v <= e0)
        };
        let below = if k == 0 { reference.cdf_left(e0) } else { reference.cdf(e0) };
        let model = (reference.cdf(e1) - below) / width;
        let empirical = count as f64 / (total * width);
        per_bin_max = per_bin_max.max((empirical - model).abs());
    }
    Comparison { cdf_sup_distance, cdf_sup_at, per_bin_max, bins, range: [lo, hi] }
}

/// Mean over samples of the smallest eigenvalue, both ends of the largest
/// gap, and the largest eigenvalue.
pub fn cluster_edges(batch: &SpectrumBatch) -> [f64; 4] {
    let mut acc = [0.0; 4];
    for s in batch.samples() {
        let (k, _) =
            s.windows(2).enumerate().fold((0, f64::NEG_INFINITY), |m, (k, w)| if w[1] - w[0] > m.1 { (k, w[1] - w[0]) } else { m });
        let e = [s[0], s[k], s[k + 1], s[s.len() - 1]];
        for i in 0..4 {
            acc[i] += e[i];
        }
    }
    acc.map(|v| v / batch.config.samples as f64)
}

/// Two-sample Kolmogorov distance between the pooled spectrum and its mirror
/// image `x -> -x`.
pub fn reflection_distance(batch: &SpectrumBatch) -> f64 {
    let sorted = batch.pooled();
    let mirror = EmpiricalCdf::new(sorted.iter().map(|x| -x).collect());
    ks_distance(&sorted, &mirror).0
}
