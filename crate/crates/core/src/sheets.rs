//! Branch points and the three labeled sheets of a spectral curve.
//!
//! Labels are fixed at infinity (`r1 ~ -a`, `r2 ~ a`, `r3 ~ V'`) and carried
//! to any point of the upper half-plane by continuation from a real anchor
//! right of every branch point. The lower half-plane follows by conjugation.
//! On the real axis the labeled roots are read off a table built once: off
//! the cuts all three roots are real and keep their order, and inside cut
//! `I_j` the pair `{r_j, r3}` is complex conjugate while the other sheet is real.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{FieldKind, SpectralCurve};
use crate::error::{Error, Result};
use crate::poly::{aberth, extract_square_factor, relative_residual, Poly};

type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Discriminant of the cubic in `w`, as a polynomial in `z`.
pub fn discriminant_w(curve: &SpectralCurve) -> Poly {
    // w^3 + b w^2 + c w + d with b = -c2, c = c1, d = -c0
    let b = -&curve.c2;
    let cc = curve.c1.clone();
    let d = -&curve.c0;
    let t1 = (&(&b * &cc) * &d).scale(18.0);
    let t2 = (&(&(&b * &b) * &b) * &d).scale(-4.0);
    let t3 = &(&b * &b) * &(&cc * &cc);
    let t4 = (&(&cc * &cc) * &cc).scale(-4.0);
    let t5 = (&d * &d).scale(-27.0);
    &(&(&t1 + &t2) + &(&t3 + &t4)) + &t5
}

/// The degree-6 polynomial `q(t)` whose value at `t = z^2` is nine times the
/// discriminant of the symmetric quartic curve. Other curves fall back to
/// [`discriminant_w`], a polynomial in `z`.
pub fn discriminant_t(curve: &SpectralCurve) -> Poly {
    let Some((al, be)) = curve.quartic_params() else {
        return discriminant_w(curve);
    };
    let a2 = curve.a * curve.a;
    let a4 = a2 * a2;
    Poly::new(vec![
        -36.0 * al.powi(3),
        9.0 * (-12.0 * al * al - 27.0 * be * be),
        9.0 * (-54.0 * be * a2 - 12.0 * al - 18.0 * al * be),
        9.0 * (-27.0 * a4 - 18.0 * al * a2 + al * al - 18.0 * be - 4.0),
        9.0 * (2.0 * al - 18.0 * a2),
        9.0 * (4.0 * be + 1.0),
        36.0 * a2,
    ])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchStructure {
    /// Left endpoint of `I2`.
    pub gamma1: f64,
    /// Right endpoint of `I2`.
    pub gamma2: f64,
    /// Upper member of the double root pair of `q(t)`; absent for curves
    /// whose discriminant has no double roots.
    pub lambda_star: Option<C>,
    pub i1: [f64; 2],
    pub i2: [f64; 2],
    pub factor_residual: f64,
}

impl BranchStructure {
    pub fn cut(&self, j: usize) -> [f64; 2] {
        if j == 1 {
            self.i1
        } else {
            self.i2
        }
    }

    /// The four endpoints in increasing order.
    pub fn endpoints(&self) -> [f64; 4] {
        [self.i1[0], self.i1[1], self.i2[0], self.i2[1]]
    }

    pub fn max_abs_endpoint(&self) -> f64 {
        self.endpoints().iter().fold(0.0f64, |m, e| m.max(e.abs()))
    }

    /// Sheet `j` whose cut strictly contains `x`.
    pub fn cut_containing(&self, x: f64) -> Option<usize> {
        [1, 2].into_iter().find(|&j| {
            let [lo, hi] = self.cut(j);
            x > lo && x < hi
        })
    }

    /// Endpoint safety radius for cut `j`.
    pub fn safety_radius(&self, j: usize) -> f64 {
        let [lo, hi] = self.cut(j);
        1e-4 * (hi - lo)
    }
}

fn signature(roots: &[C]) -> String {
    let scale = |r: &C| 1e-7 * (1.0 + r.norm());
    let real: Vec<f64> = roots.iter().filter(|r| r.im.abs() <= scale(r)).map(|r| r.re).collect();
    let pos = real.iter().filter(|&&x| x > 0.0).count();
    format!("{} real ({} positive, {} non-positive), {} non-real", real.len(), pos, real.len() - pos, roots.len() - real.len())
}

fn polish_real(p: &Poly, mut x: f64) -> f64 {
    let dp = p.derivative();
    for _ in 0..4 {
        let (f, d) = (p.eval(x), dp.eval(x));
        if d == 0.0 {
            break;
        }
        let nx = x - f / d;
        if p.eval(nx).abs() < f.abs() {
            x = nx;
        } else {
            break;
        }
    }
    x
}

/// Classifies the roots of `q(t)`: two simple positive roots `gamma1^2 <
/// gamma2^2` and a complex double pair `lambda*`, certified by a square
/// factorization with relative residual at most `tol`. The leading
/// coefficient must be `36 a^2`.
pub fn branch_points(q: &Poly, a: f64, tol: f64) -> Result<BranchStructure> {
    let lead = 36.0 * a * a;
    if (q.lead() - lead).abs() > 1e-12 * lead {
        return Err(Error::InvalidArgument(format!("q has leading coefficient {}, expected 36 a^2 = {lead}", q.lead())));
    }
    let raw = aberth(&q.complex_coeffs())?;
    let scale = |r: &C| 1e-7 * (1.0 + r.norm());
    let mut real: Vec<f64> = raw.iter().filter(|r| r.im.abs() <= scale(r)).map(|r| r.re).collect();
    let upper: Vec<C> = raw.iter().copied().filter(|r| r.im > scale(r)).collect();
    let sig = signature(&raw);
    if q.degree() != 6 || real.len() != 2 || real.iter().any(|&x| x <= 0.0) || upper.len() != 2 {
        return Err(Error::Classification { signature: sig });
    }
    let spread = (upper[0] - upper[1]).norm();
    if spread > 1e-4 * (1.0 + upper[0].norm()) {
        return Err(Error::Classification { signature: format!("{sig}; non-real roots are not a double pair (spread {spread:e})") });
    }
    real.sort_by(f64::total_cmp);
    let (t1, t2) = (polish_real(q, real[0]), polish_real(q, real[1]));
    if !(t1 < t2) {
        return Err(Error::Classification { signature: format!("{sig}; positive roots coincide") });
    }
    let (s, factor_residual) = extract_square_factor(q, &[c(t1, 0.0), c(t2, 0.0)], tol)?;
    let (s1, s0) = (s.coeff(1), s.coeff(0));
    let disc = C::from(s1 * s1 - 4.0 * s0).sqrt();
    let mut lambda = (-s1 + disc) / 2.0;
    if lambda.im < 0.0 {
        lambda = lambda.conj();
    }
    let (g1, g2) = (t1.sqrt(), t2.sqrt());
    Ok(BranchStructure { gamma1: g1, gamma2: g2, lambda_star: Some(lambda), i1: [-g2, -g1], i2: [g1, g2], factor_residual })
}

/// Branch structure of any one-cut curve: the quartic goes through
/// [`branch_points`]; otherwise the discriminant in `z` must have exactly
/// four simple real roots `e1 < e2 < e3 < e4`, giving `I1 = [e1, e2]` and
/// `I2 = [e3, e4]`.
pub fn branch_structure(curve: &SpectralCurve, tol: f64) -> Result<BranchStructure> {
    if curve.field == FieldKind::Quartic {
        return branch_points(&discriminant_t(curve), curve.a, tol);
    }
    let disc = discriminant_w(curve);
    let raw = aberth(&disc.complex_coeffs())?;
    let scale = |r: &C| 1e-7 * (1.0 + r.norm());
    let mut real: Vec<f64> = raw.iter().filter(|r| r.im.abs() <= scale(r)).map(|r| r.re).collect();
    if real.len() != 4 {
        return Err(Error::Classification { signature: signature(&raw) });
    }
    real.sort_by(f64::total_cmp);
    let e: Vec<f64> = real.iter().map(|&x| polish_real(&disc, x)).collect();
    let min_gap = e.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if !(min_gap > 1e-6 * (1.0 + e[3].abs())) {
        return Err(Error::Classification { signature: format!("{}; real roots not simple", signature(&raw)) });
    }
    Ok(BranchStructure { gamma1: e[2], gamma2: e[3], lambda_star: None, i1: [e[0], e[1]], i2: [e[2], e[3]], factor_residual: 0.0 })
}

fn newton_polish(curve: &SpectralCurve, z: C, w: C) -> C {
    let (c2, c1, c0) = curve.coeffs_at(z);
    let mut w = w;
    let mut res = curve.relative_residual(z, w);
    for _ in 0..3 {
        if res == 0.0 {
            break;
        }
        let p = ((w - c2) * w + c1) * w - c0;
        let dp = (3.0 * w - 2.0 * c2) * w + c1;
        if dp.norm() == 0.0 {
            break;
        }
        let nw = w - p / dp;
        let nres = curve.relative_residual(z, nw);
        if nres < res {
            w = nw;
            res = nres;
        } else {
            break;
        }
    }
    w
}

/// The three roots in `w` at `z`, unlabeled.
pub fn roots_at(curve: &SpectralCurve, z: C) -> [C; 3] {
    let coeffs = curve.cubic_at(z);
    let r = match aberth(&coeffs) {
        Ok(r) => r,
        Err(Error::RootsNotConverged { partial, .. }) => partial,
        Err(_) => unreachable!("monic cubic"),
    };
    [newton_polish(curve, z, r[0]), newton_polish(curve, z, r[1]), newton_polish(curve, z, r[2])]
}

/// Roots at real `x`: either three reals (ascending) or one real root and a
/// conjugate pair, returned as `(real, upper)` with `upper.im >= 0`.
#[derive(Clone, Copy, Debug)]
pub enum RealRoots {
    Three([f64; 3]),
    Pair { real: f64, upper: C },
}

/// Roots of the curve at real `x`. `inside_cut` selects the one-real-root
/// form; the pair is built from the deflated quadratic so the two members are
/// exact conjugates.
pub fn real_roots(curve: &SpectralCurve, x: f64, inside_cut: bool) -> RealRoots {
    let z = c(x, 0.0);
    let raw = roots_at(curve, z);
    let (c2, c1, c0) = (curve.c2.eval(x), curve.c1.eval(x), curve.c0.eval(x));
    let p = Poly::new(vec![-c0, c1, -c2, 1.0]);
    if inside_cut {
        let k = (0..3).min_by(|&i, &j| raw[i].im.abs().total_cmp(&raw[j].im.abs())).unwrap();
        let rho = polish_real(&p, raw[k].re);
        // w^3 - c2 w^2 + c1 w - c0 = (w - rho)(w^2 + s w + t)
        let s = rho - c2;
        let t = c1 + rho * s;
        let disc = t - 0.25 * s * s;
        let mut upper = c(-0.5 * s, disc.max(0.0).sqrt());
        upper = newton_polish(curve, z, upper);
        if upper.im < 0.0 {
            upper = upper.conj();
        }
        RealRoots::Pair { real: rho, upper }
    } else {
        let mut v = [raw[0].re, raw[1].re, raw[2].re];
        v.sort_by(f64::total_cmp);
        let v = v.map(|r| polish_real(&p, r));
        RealRoots::Three(v)
    }
}

/// Which side of the real axis a boundary value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SheetValues {
    pub z: C,
    pub r1: C,
    pub r2: C,
    pub r3: C,
    pub f1: C,
    pub f2: C,
    pub residuals: [f64; 3],
}

impl SheetValues {
    fn new(curve: &SpectralCurve, z: C, r: [C; 3]) -> Self {
        let residuals = r.map(|w| curve.relative_residual(z, w));
        SheetValues { z, r1: r[0], r2: r[1], r3: r[2], f1: r[0] + curve.a, f2: r[1] - curve.a, residuals }
    }

    pub fn r(&self) -> [C; 3] {
        [self.r1, self.r2, self.r3]
    }

    /// `f_j` for `j` in {1, 2}.
    pub fn f(&self, j: usize) -> C {
        if j == 1 {
            self.f1
        } else {
            self.f2
        }
    }

    pub fn conj(&self) -> Self {
        SheetValues {
            z: self.z.conj(),
            r1: self.r1.conj(),
            r2: self.r2.conj(),
            r3: self.r3.conj(),
            f1: self.f1.conj(),
            f2: self.f2.conj(),
            residuals: self.residuals,
        }
    }
}

/// Layout of the roots on one cut.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutLayout {
    /// Label (0-based) of the sheet that stays real on this cut.
    pub real_label: usize,
    /// Sign of `Im r_j^+` on the cut.
    pub plus_im_sign: f64,
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Labeled-sheet evaluator for one curve. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Sheets {
    pub curve: SpectralCurve,
    pub branch: BranchStructure,
    /// Real anchor where labels are read off their asymptotics.
    pub anchor: f64,
    /// Height of the horizontal leg of continuation paths.
    pub height: f64,
    top: [C; 3],
    /// `order[k][label]`: rank of `label` among the sorted real roots on the
    /// k-th interval off the cuts, left to right.
    order: [[usize; 3]; 3],
    cuts: [CutLayout; 2],
    avoid: Vec<C>,
}

impl Sheets {
    pub fn new(curve: &SpectralCurve, branch: &BranchStructure) -> Result<Self> {
        let a = curve.a;
        let e = branch.endpoints();
        let span = e[3] - e[0];
        let mut anchor = (2.0 * branch.max_abs_endpoint()).max(1.0);
        let vp = |x: f64| curve.c2.eval(x);
        while vp(anchor) < 4.0 * a {
            anchor *= 1.5;
        }
        let anchor_roots = loop {
            let x1 = curve.x1();
            let x2 = curve.x2();
            let target = [-a + x1 / anchor, a + x2 / anchor, vp(anchor) - 1.0 / anchor];
            let RealRoots::Three(sorted) = real_roots(curve, anchor, false) else { unreachable!() };
            let r = best_match(&target.map(|t| c(t, 0.0)), &sorted.map(|t| c(t, 0.0)));
            let err = (0..3).map(|i| (r[i].re - target[i]).abs()).fold(0.0, f64::max);
            let sep = (0..3)
                .flat_map(|i| (0..3).filter(move |&k| k != i).map(move |k| (i, k)))
                .map(|(i, k)| (target[i] - target[k]).abs())
                .fold(f64::INFINITY, f64::min);
            if err < 0.1 * sep {
                break r;
            }
            anchor *= 2.0;
            if anchor > 1e8 {
                return Err(Error::Classification { signature: "sheets not separated at the anchor".into() });
            }
        };

        // Nodes: non-real zeros of the discriminant, where two sheets touch
        // without branching. Keep the horizontal leg clear of them.
        let disc = discriminant_w(curve);
        let avoid: Vec<C> =
            aberth(&disc.complex_coeffs()).unwrap_or_default().into_iter().filter(|r| r.im.abs() > 1e-7 * (1.0 + r.norm())).collect();
        let mut height = 0.5 * span;
        for _ in 0..40 {
            if avoid.iter().all(|n| (n.im.abs() - height).abs() > 0.1 * height) {
                break;
            }
            height *= 1.17;
        }

        let mut sheets = Sheets {
            curve: curve.clone(),
            branch: branch.clone(),
            anchor,
            height,
            top: anchor_roots,
            order: [[0, 1, 2]; 3],
            cuts: [CutLayout { real_label: 1, plus_im_sign: -1.0 }; 2],
            avoid,
        };
        sheets.top = sheets.continue_along(anchor_roots, c(anchor, 0.0), c(anchor, height))?;

        // ranks on the three intervals off the cuts
        let reps = [e[0] - 0.25 * span, 0.5 * (e[1] + e[2]), anchor];
        for (k, &x) in reps.iter().enumerate() {
            let lab = sheets.continue_from_top(c(x, 0.0))?;
            let mut idx = [0usize, 1, 2];
            idx.sort_by(|&i, &j| lab[i].re.total_cmp(&lab[j].re));
            let mut order = [0usize; 3];
            for (rank, &label) in idx.iter().enumerate() {
                order[label] = rank;
            }
            sheets.order[k] = order;
        }

        // layout on each cut from a point just above its midpoint
        for j in 1..=2 {
            let [lo, hi] = branch.cut(j);
            let x = 0.5 * (lo + hi);
            let eps = 1e-3 * (hi - lo);
            let lab = sheets.continue_from_top(c(x, eps))?;
            let RealRoots::Pair { real, upper } = real_roots(curve, x, true) else { unreachable!() };
            let real_label = (0..3).min_by(|&i, &k| (lab[i] - real).norm().total_cmp(&(lab[k] - real).norm())).unwrap();
            let expected = if j == 1 { 1 } else { 0 };
            if real_label != expected {
                return Err(Error::Classification {
                    signature: format!("cut I{j}: sheet r{} is real, expected r{}", real_label + 1, expected + 1),
                });
            }
            let rj = lab[j - 1];
            let plus_im_sign = if (rj - upper).norm() < (rj - upper.conj()).norm() { 1.0 } else { -1.0 };
            sheets.cuts[j - 1] = CutLayout { real_label, plus_im_sign };
        }
        Ok(sheets)
    }

    pub fn cut_layout(&self, j: usize) -> CutLayout {
        self.cuts[j - 1]
    }

    fn nearest_obstacle(&self, z: C) -> (f64, f64) {
        let mut best = (f64::INFINITY, 0.0);
        for e in self.branch.endpoints() {
            let d = (z - e).norm();
            if d < best.0 {
                best = (d, e);
            }
        }
        for n in &self.avoid {
            let d = (z - n).norm();
            if d < best.0 {
                best = (d, n.re);
            }
        }
        best
    }

    /// Carries labeled roots along the segment `from -> to`.
    pub fn continue_along(&self, roots: [C; 3], from: C, to: C) -> Result<[C; 3]> {
        let len = (to - from).norm();
        if len == 0.0 {
            return Ok(roots);
        }
        let mut cur = roots;
        let mut t = 0.0;
        let mut h: f64 = 1.0 / 16.0;
        while t < 1.0 {
            let z0 = from + (to - from) * t;
            let (dist, point) = self.nearest_obstacle(z0);
            let cap = (0.5 * dist / len).max(1e-300);
            h = h.min(1.0 - t).min(cap).min(1.0 / 16.0);
            let z = from + (to - from) * (t + h);
            let new = roots_at(&self.curve, z);
            let matched = best_match(&cur, &new);
            let ok = (0..3).all(|i| {
                let disp = (matched[i] - cur[i]).norm();
                let comp = (0..3).filter(|&k| k != i).map(|k| (matched[k] - matched[i]).norm()).fold(f64::INFINITY, f64::min);
                disp < 0.1 * comp
            });
            if ok {
                cur = matched;
                t += h;
                h *= 2.0;
            } else {
                h *= 0.5;
                if h * len < 1e-13 * (1.0 + z0.norm()) {
                    return Err(Error::TooCloseToBranchPoint { point, distance: dist });
                }
            }
        }
        Ok(cur)
    }

    // Upper half-plane only: top corner, horizontal leg, vertical leg.
    fn continue_from_top(&self, z: C) -> Result<[C; 3]> {
        debug_assert!(z.im >= 0.0);
        let corner = c(self.anchor, self.height);
        if z.im >= self.height {
            let r = self.continue_along(self.top, corner, c(self.anchor, z.im))?;
            self.continue_along(r, c(self.anchor, z.im), z)
        } else {
            let r = self.continue_along(self.top, corner, c(z.re, self.height))?;
            self.continue_along(r, c(z.re, self.height), z)
        }
    }

    /// Labeled sheets at `z`. Real `z` inside a cut is rejected; use
    /// [`Sheets::boundary`].
    pub fn label(&self, z: C) -> Result<SheetValues> {
        if z.im == 0.0 {
            let x = z.re;
            if self.branch.cut_containing(x).is_some() {
                return Err(Error::OnCut(x));
            }
            return self.boundary(x, Side::Plus);
        }
        if z.im < 0.0 {
            return Ok(self.label(z.conj())?.conj());
        }
        let r = self.continue_from_top(z)?;
        Ok(SheetValues::new(&self.curve, z, r))
    }

    /// Labeled roots at real `x` as limits from the upper (`Plus`) or lower
    /// (`Minus`) half-plane. Off the cuts both sides agree.
    pub fn boundary(&self, x: f64, side: Side) -> Result<SheetValues> {
        let z = c(x, 0.0);
        let r = match self.branch.cut_containing(x) {
            Some(j) => {
                let RealRoots::Pair { real, upper } = real_roots(&self.curve, x, true) else { unreachable!() };
                let lay = self.cuts[j - 1];
                let plus = if lay.plus_im_sign > 0.0 { upper } else { upper.conj() };
                let rj = if side == Side::Plus { plus } else { plus.conj() };
                let mut r = [C::default(); 3];
                r[lay.real_label] = c(real, 0.0);
                r[j - 1] = rj;
                r[2] = rj.conj();
                r
            }
            None => {
                let e = self.branch.endpoints();
                let k = if x <= e[0] {
                    0
                } else if x <= e[2] {
                    1
                } else {
                    2
                };
                let RealRoots::Three(sorted) = real_roots(&self.curve, x, false) else { unreachable!() };
                let o = self.order[k];
                [c(sorted[o[0]], 0.0), c(sorted[o[1]], 0.0), c(sorted[o[2]], 0.0)]
            }
        };
        Ok(SheetValues::new(&self.curve, z, r))
    }

    /// Sheet values along a path in the open upper or lower half-plane,
    /// labeling the first point and continuing through the rest.
    pub fn trace(&self, path: &[C]) -> Result<Vec<SheetValues>> {
        let Some(&first) = path.first() else { return Ok(Vec::new()) };
        let mut prev = (first, self.label(first)?.r());
        let mut out = Vec::with_capacity(path.len());
        out.push(SheetValues::new(&self.curve, first, prev.1));
        for &z in &path[1..] {
            let r = self.continue_along(prev.1, prev.0, z)?;
            out.push(SheetValues::new(&self.curve, z, r));
            prev = (z, r);
        }
        Ok(out)
    }

    /// Sheet values on a list of points, in parallel, order preserved.
    pub fn sweep(&self, zs: &[C]) -> Result<Vec<SheetValues>> {
        zs.par_iter()
            .map(
                |&z| {
                    if z.im == 0.0 && self.branch.cut_containing(z.re).is_some() {
                        self.boundary(z.re, Side::Plus)
                    } else {
                        self.label(z)
                    }
                },
            )
            .collect()
    }
}

fn best_match(prev: &[C; 3], new: &[C; 3]) -> [C; 3] {
    let perm = PERMS
        .iter()
        .min_by(|p, q| {
            let cost = |p: &[usize; 3]| (0..3).map(|i| (new[p[i]] - prev[i]).norm()).sum::<f64>();
            cost(p).total_cmp(&cost(q))
        })
        .unwrap();
    [new[perm[0]], new[perm[1]], new[perm[2]]]
}

/// Labeled sheets at `z`; builds a fresh [`Sheets`].
pub fn label_sheets(curve: &SpectralCurve, branch: &BranchStructure, z: C) -> Result<SheetValues> {
    Sheets::new(curve, branch)?.label(z)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryValues {
    pub f_plus: C,
    pub f_minus: C,
    pub r3_plus: C,
    pub r3_minus: C,
}

impl Sheets {
    /// `f_j^±` and `r3^±` at `x` strictly inside `I_j`, at least the safety
    /// radius away from both ends.
    pub fn boundary_values(&self, x: f64, j: usize) -> Result<BoundaryValues> {
        let [lo, hi] = self.branch.cut(j);
        let r = self.branch.safety_radius(j);
        if !(x > lo + r && x < hi - r) {
            return Err(Error::InvalidArgument(format!("x = {x} is not inside I{j} by the safety radius {r:e}")));
        }
        let p = self.boundary(x, Side::Plus)?;
        let m = self.boundary(x, Side::Minus)?;
        Ok(BoundaryValues { f_plus: p.f(j), f_minus: m.f(j), r3_plus: p.r3, r3_minus: m.r3 })
    }
}

pub fn boundary_values(curve: &SpectralCurve, branch: &BranchStructure, x: f64, j: usize) -> Result<BoundaryValues> {
    Sheets::new(curve, branch)?.boundary_values(x, j)
}

/// Depressed-cubic auxiliaries of the quartic curve: `w = y + z^3/3` turns
/// the curve into `y^3 - 3 H(z) y + R(z) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CardanoAux {
    pub big_r: Poly,
    pub big_h: Poly,
    /// The positive zero of `R`.
    pub eta: f64,
}

pub fn cardano_aux(curve: &SpectralCurve) -> Result<CardanoAux> {
    let (al, be) = curve.quartic_params().ok_or_else(|| Error::InvalidArgument("Cardano auxiliaries need the quartic curve".into()))?;
    let a2 = curve.a * curve.a;
    let big_r = Poly::new(vec![0.0, be, 0.0, al / 3.0 + a2, 0.0, 1.0 / 3.0, 0.0, 0.0, 0.0, -2.0 / 27.0]);
    let big_h = Poly::new(vec![-al / 3.0, 0.0, -1.0 / 3.0, 0.0, 0.0, 0.0, 1.0 / 9.0]);
    // R(z)/z as a quartic in t = z^2
    let rt = Poly::new(vec![be, al / 3.0 + a2, 1.0 / 3.0, 0.0, -2.0 / 27.0]);
    let roots = aberth(&rt.complex_coeffs())?;
    let eta = roots
        .iter()
        .filter(|r| r.im.abs() <= 1e-9 * (1.0 + r.norm()) && r.re > 0.0)
        .map(|r| polish_real(&rt, r.re).sqrt())
        .fold(f64::NAN, f64::max);
    if eta.is_nan() {
        return Err(Error::Classification { signature: "R has no positive zero".into() });
    }
    Ok(CardanoAux { big_r, big_h, eta })
}

/// `sqrt(-q(z^2)) = 6 i a (z^2 - λ)(z^2 - conj λ) Π sqrt(z ∓ γ_k)` with
/// principal square roots.
pub fn sqrt_minus_q(branch: &BranchStructure, a: f64, z: C) -> Option<C> {
    let lam = branch.lambda_star?;
    let z2 = z * z;
    let prod = (z - branch.gamma1).sqrt() * (z - branch.gamma2).sqrt() * (z + branch.gamma1).sqrt() * (z + branch.gamma2).sqrt();
    Some(c(0.0, 6.0 * a) * (z2 - lam) * (z2 - lam.conj()) * prod)
}

/// Largest relative curve residual over a set of roots.
pub fn worst_residual(curve: &SpectralCurve, z: C, r: &[C]) -> f64 {
    let coeffs = curve.cubic_at(z);
    r.iter().map(|&w| relative_residual(&coeffs, w)).fold(0.0, f64::max)
}
