//! Limiting eigenvalue density and the g-functions.
//!
//! On cut `I_j` the density is `rho = -(1/pi) Im f_j^+`, so each cut carries
//! mass `x_j` and the total is 1. The g-functions are antiderivatives of
//! `f_j / x_j` normalized so that `g_j(z) = log z + o(1)`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_with_breaks, Ends};
use crate::sheets::{Sheets, Side};

type C = Complex64;

/// `-(1/pi) Im f_j^+(x)` on the cut containing `x`, zero elsewhere.
pub fn density_at(sheets: &Sheets, x: f64) -> f64 {
    match sheets.branch.cut_containing(x) {
        Some(j) => match sheets.boundary(x, Side::Plus) {
            Ok(v) => (-v.f(j).im / std::f64::consts::PI).max(0.0),
            Err(_) => 0.0,
        },
        None => 0.0,
    }
}

/// `∫_{I_j} rho`.
pub fn cut_mass(sheets: &Sheets, j: usize) -> f64 {
    let [lo, hi] = sheets.branch.cut(j);
    integrate(|x| density_at(sheets, x), lo, hi, Ends::BOTH, 4)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    pub support: Vec<[f64; 2]>,
    pub xs: Vec<f64>,
    pub rho: Vec<f64>,
    /// Cumulative mass at each abscissa.
    pub cdf: Vec<f64>,
    pub masses: Vec<f64>,
    pub total_mass: f64,
}

/// First-kind Chebyshev points on `[-1, 1]`, ascending and exactly
/// antisymmetric.
fn chebyshev(n: usize) -> Vec<f64> {
    let mut t = vec![0.0; n];
    for k in 0..n / 2 {
        let v = ((2 * k + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos();
        t[n - 1 - k] = v;
        t[k] = -v;
    }
    t
}

/// Density on `points_per_cut` Chebyshev points of each cut, with the
/// cumulative mass at every point.
pub fn profile(sheets: &Sheets, points_per_cut: usize) -> Result<DensityProfile> {
    if points_per_cut == 0 {
        return Err(Error::InvalidArgument("points_per_cut must be positive".into()));
    }
    let t = chebyshev(points_per_cut);
    let mut support = Vec::new();
    let mut xs = Vec::new();
    let mut masses = Vec::new();
    for j in 1..=2 {
        let [lo, hi] = sheets.branch.cut(j);
        support.push([lo, hi]);
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        xs.extend(t.iter().map(|&s| mid + half * s));
    }
    let rho: Vec<f64> = xs.par_iter().map(|&x| density_at(sheets, x)).collect();

    // cumulative mass between consecutive nodes; square-root panels at the ends
    let mut cdf = Vec::with_capacity(xs.len());
    let mut before = 0.0;
    for (j, &[lo, hi]) in support.iter().enumerate() {
        let nodes = &xs[j * points_per_cut..(j + 1) * points_per_cut];
        let mut pieces: Vec<(f64, f64, Ends)> = Vec::with_capacity(nodes.len() + 1);
        pieces.push((lo, nodes[0], Ends::LO));
        for w in nodes.windows(2) {
            pieces.push((w[0], w[1], Ends::NONE));
        }
        pieces.push((*nodes.last().unwrap(), hi, Ends::HI));
        let parts: Vec<f64> = pieces.par_iter().map(|&(p, q, e)| integrate(|x| density_at(sheets, x), p, q, e, 1)).collect();
        let mut acc = 0.0;
        for &p in &parts[..parts.len() - 1] {
            acc += p;
            cdf.push(before + acc);
        }
        let mass = acc + parts[parts.len() - 1];
        masses.push(mass);
        before += mass;
    }
    let total_mass = masses.iter().sum();
    Ok(DensityProfile { support, xs, rho, cdf, masses, total_mass })
}

/// A distribution function to compare samples against.
pub trait ReferenceCdf {
    /// `P(X <= x)`
    fn cdf(&self, x: f64) -> f64;
    /// `P(X < x)`
    fn cdf_left(&self, x: f64) -> f64 {
        self.cdf(x)
    }
}

impl DensityProfile {
    /// Piecewise cubic Hermite interpolation of the cumulative mass, using
    /// the density as slope and the cut endpoints as extra knots.
    pub fn cdf_at(&self, x: f64) -> f64 {
        let n = self.xs.len() / self.support.len();
        let mut before = 0.0;
        for (j, &[lo, hi]) in self.support.iter().enumerate() {
            if x <= lo {
                return before;
            }
            let mass = self.masses[j];
            if x < hi {
                let xs = &self.xs[j * n..(j + 1) * n];
                let k = xs.partition_point(|&v| v <= x);
                let (x0, y0, d0) = if k == 0 { (lo, before, 0.0) } else { (xs[k - 1], self.cdf[j * n + k - 1], self.rho[j * n + k - 1]) };
                let (x1, y1, d1) = if k == n { (hi, before + mass, 0.0) } else { (xs[k], self.cdf[j * n + k], self.rho[j * n + k]) };
                let h = x1 - x0;
                let s = (x - x0) / h;
                let (h00, h10, h01, h11) =
                    ((1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s), s * (1.0 - s) * (1.0 - s), s * s * (3.0 - 2.0 * s), s * s * (s - 1.0));
                return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
            }
            before += mass;
        }
        before
    }

    /// Density interpolated linearly between profile points.
    pub fn rho_at(&self, x: f64) -> f64 {
        let n = self.xs.len() / self.support.len();
        for (j, &[lo, hi]) in self.support.iter().enumerate() {
            if x > lo && x < hi {
                let xs = &self.xs[j * n..(j + 1) * n];
                let rho = &self.rho[j * n..(j + 1) * n];
                let k = xs.partition_point(|&v| v <= x);
                let (x0, y0) = if k == 0 { (lo, 0.0) } else { (xs[k - 1], rho[k - 1]) };
                let (x1, y1) = if k == n { (hi, 0.0) } else { (xs[k], rho[k]) };
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            }
        }
        0.0
    }
}

impl ReferenceCdf for DensityProfile {
    fn cdf(&self, x: f64) -> f64 {
        self.cdf_at(x)
    }
}

/// g-functions of one curve, with their normalization constants.
#[derive(Clone, Debug)]
pub struct GFunctions<'a> {
    pub sheets: &'a Sheets,
    /// Base point of every path; the continuation anchor.
    pub base: f64,
    /// `T_j = (1/x_j) ∫_base^∞ (f_j(s) - x_j/s) ds`
    pub t: [f64; 2],
    /// `g_j` at the right end of `I_j`.
    pub g_right: [f64; 2],
    /// Truncation point of the improper integrals.
    pub cutoff: f64,
}

const PANELS: usize = 2;

impl<'a> GFunctions<'a> {
    pub fn new(sheets: &'a Sheets) -> Result<Self> {
        let base = sheets.anchor;
        let cutoff = 1e4 * sheets.branch.max_abs_endpoint().max(1.0);
        let mut t = [0.0; 2];
        for j in 1..=2 {
            let xj = sheets.curve.x(j);
            let f = |s: f64| sheets.boundary(s, Side::Plus).map(|v| v.f(j).re).unwrap_or(f64::NAN);
            // geometric panels from base to the cutoff, then an O(1/s^2) tail
            let mut lo = base;
            let mut sum = 0.0;
            while lo < cutoff {
                let hi = (2.0 * lo).min(cutoff);
                sum += integrate(|s| f(s) - xj / s, lo, hi, Ends::NONE, 1);
                lo = hi;
            }
            let m = (f(cutoff) - xj / cutoff) * cutoff * cutoff;
            sum += m / cutoff;
            if !sum.is_finite() {
                return Err(Error::Quadrature { lo: base, hi: cutoff, reason: "non-finite normalization integral".into() });
            }
            t[j - 1] = sum / xj;
        }
        let mut g = GFunctions { sheets, base, t, g_right: [0.0; 2], cutoff };
        for j in 1..=2 {
            let right = sheets.branch.cut(j)[1];
            g.g_right[j - 1] = g.g_real_right(j, right)?;
        }
        Ok(g)
    }

    fn breaks(&self) -> [f64; 4] {
        self.sheets.branch.endpoints()
    }

    fn f_real(&self, j: usize, s: f64, side: Side) -> (f64, f64) {
        match self.sheets.boundary(s, side) {
            Ok(v) => {
                let f = v.f(j);
                (f.re, f.im)
            }
            Err(_) => (f64::NAN, f64::NAN),
        }
    }

    // g_j at real x right of I_j: real-axis path from the base point.
    fn g_real_right(&self, j: usize, x: f64) -> Result<f64> {
        let xj = self.sheets.curve.x(j);
        let br = self.breaks();
        let int = integrate_with_breaks(|s| self.f_real(j, s, Side::Plus).0, self.base, x, &br, PANELS);
        let g = self.base.ln() + int / xj - self.t[j - 1];
        if g.is_finite() {
            Ok(g)
        } else {
            Err(Error::Quadrature { lo: x.min(self.base), hi: x.max(self.base), reason: "non-finite g".into() })
        }
    }

    /// Boundary value `g_j^±(x)` at real `x`. Right of `I_j` both sides agree.
    pub fn g_real(&self, j: usize, x: f64, side: Side) -> Result<C> {
        let right = self.sheets.branch.cut(j)[1];
        if x > right {
            return Ok(C::new(self.g_real_right(j, x)?, 0.0));
        }
        let xj = self.sheets.curve.x(j);
        let br = self.breaks();
        let re = integrate_with_breaks(|s| self.f_real(j, s, side).0, right, x, &br, PANELS);
        let im = integrate_with_breaks(|s| self.f_real(j, s, side).1, right, x, &br, PANELS);
        let g = C::new(self.g_right[j - 1] + re / xj, im / xj);
        if g.re.is_finite() && g.im.is_finite() {
            Ok(g)
        } else {
            Err(Error::Quadrature { lo: x, hi: right, reason: "non-finite boundary value of g".into() })
        }
    }

    /// `g_j(z)` off `(-∞, right end of I_j]`, along a vertical-then-horizontal
    /// path from the base point that stays in one half-plane.
    pub fn g(&self, j: usize, z: C) -> Result<C> {
        let right = self.sheets.branch.cut(j)[1];
        if z.im == 0.0 {
            if z.re <= right {
                return Err(Error::InvalidArgument(format!("z = {} lies on the cut (-inf, {right}] of g{j}; use boundary values", z.re)));
            }
            return Ok(C::new(self.g_real_right(j, z.re)?, 0.0));
        }
        if z.im < 0.0 {
            return Ok(self.g(j, z.conj())?.conj());
        }
        let xj = self.sheets.curve.x(j);
        let mut acc = C::new(0.0, 0.0);
        // vertical leg: s = base + i y
        let vert = crate::quadrature::nodes(0.0, z.im, Ends::NONE, PANELS);
        let path: Vec<C> = vert.iter().map(|&(y, _)| C::new(self.base, y)).collect();
        for (v, &(_, w)) in self.sheets.trace(&path)?.iter().zip(&vert) {
            acc += v.f(j) * C::new(0.0, w);
        }
        // horizontal leg: s = x + i Im z, walked from base toward Re z
        let (lo, hi, sign) = if z.re < self.base { (z.re, self.base, -1.0) } else { (self.base, z.re, 1.0) };
        let panels = (PANELS as f64 * (hi - lo) / self.sheets.branch.max_abs_endpoint().max(1.0)).ceil() as usize;
        let mut horiz = crate::quadrature::nodes(lo, hi, Ends::NONE, panels.max(PANELS));
        if sign < 0.0 {
            horiz.reverse();
        }
        let path: Vec<C> = horiz.iter().map(|&(x, _)| C::new(x, z.im)).collect();
        for (v, &(_, w)) in self.sheets.trace(&path)?.iter().zip(&horiz) {
            acc += v.f(j) * (sign * w);
        }
        Ok(self.base.ln() + acc / xj - self.t[j - 1])
    }

    /// `g0 = x1 g1 + x2 g2`
    pub fn g0(&self, z: C) -> Result<C> {
        let c = &self.sheets.curve;
        Ok(self.g(1, z)? * c.x1() + self.g(2, z)? * c.x2())
    }

    /// `Phi_j(x) = x_j (g_j^- + g_j^+) + x_k g_k^- - V_j(x)`.
    pub fn phi(&self, j: usize, x: f64) -> Result<C> {
        let c = &self.sheets.curve;
        let k = 3 - j;
        let xj = c.x(j);
        let gp = self.g_real(j, x, Side::Plus)?;
        let gm = self.g_real(j, x, Side::Minus)?;
        let gk = self.g_real(k, x, Side::Minus)?;
        Ok((gp + gm) * xj + gk * c.x(k) - c.vj(j, x))
    }
}

/// g-function value at `z`; builds the normalization constants on each call.
pub fn g_function(sheets: &Sheets, j: usize, z: C) -> Result<C> {
    GFunctions::new(sheets)?.g(j, z)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GConditions {
    pub j: usize,
    /// Lagrange constant: `Re Phi_j(x0) / x_j` at the cut midpoint.
    pub ell: f64,
    /// `Im Phi_j`, constant along the cut.
    pub phi_imag: f64,
    pub constancy_dev: f64,
    pub constancy_at: f64,
    /// Largest `Re Phi_j - x_j ell_j` off the cut; negative when the
    /// inequality holds.
    pub outside_margin: f64,
    pub outside_at: f64,
    /// Outer truncation of the real line.
    pub truncation: f64,
}

/// Equality on `I_j` and strict inequality off it, at the level of g.
pub fn check_g_conditions(g: &GFunctions, j: usize, grid: usize) -> Result<GConditions> {
    let br = &g.sheets.branch;
    let [lo, hi] = br.cut(j);
    let len = hi - lo;
    let x0 = 0.5 * (lo + hi);
    let p0 = g.phi(j, x0)?;
    let xj = g.sheets.curve.x(j);

    let inside: Vec<f64> = (0..grid).map(|i| lo + len * (i as f64 + 0.5) / grid as f64).collect();
    let dev = inside.par_iter().map(|&x| g.phi(j, x).map(|p| ((p - p0).norm(), x))).collect::<Result<Vec<_>>>()?;
    let (constancy_dev, constancy_at) = dev.into_iter().fold((0.0, x0), |m, d| if d.0 > m.0 { d } else { m });

    let truncation = 10.0 * br.max_abs_endpoint();
    let gap = 0.01 * len;
    let mut outside = Vec::with_capacity(2 * grid);
    for i in 0..grid {
        let s = i as f64 / (grid - 1).max(1) as f64;
        outside.push(lo - gap - s * (lo - gap + truncation));
        outside.push(hi + gap + s * (truncation - hi - gap));
    }
    let margins = outside.par_iter().map(|&x| g.phi(j, x).map(|p| (p.re - p0.re, x))).collect::<Result<Vec<_>>>()?;
    let (outside_margin, outside_at) = margins.into_iter().fold((f64::NEG_INFINITY, 0.0), |m, d| if d.0 > m.0 { d } else { m });

    Ok(GConditions { j, ell: p0.re / xj, phi_imag: p0.im, constancy_dev, constancy_at, outside_margin, outside_at, truncation })
}
