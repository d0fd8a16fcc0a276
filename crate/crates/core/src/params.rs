//! Free parameters `(alpha, beta)` of the symmetric quartic curve.
//!
//! The discriminant `q(t)` of the quartic curve must have a double root pair.
//! `Res(q, q')` splits into two explicit polynomial factors `B1`, `B2`, and
//! the admissible point is a critical zero of `B2`. Near it the leading
//! monomials cancel like `729 u^3 (1 + u)^3 a^16`, so sums are accumulated in
//! double-double arithmetic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::quartic_curve;
use crate::error::{Error, Result};
use crate::poly::{resultant, Scaled};
use crate::sheets::{branch_points, discriminant_t, BranchStructure};

/// `B2` as `(coefficient, power of alpha, power of beta, power of a)`.
pub const B2_TERMS: [(f64, u32, u32, u32); 35] = [
    (729.0, 3, 0, 10),
    (-729.0, 0, 3, 8),
    (-729.0, 2, 1, 8),
    (2187.0, 4, 0, 8),
    (-1944.0, 1, 3, 6),
    (216.0, 3, 0, 6),
    (-4617.0, 3, 1, 6),
    (2187.0, 5, 0, 6),
    (-216.0, 0, 3, 4),
    (2592.0, 0, 4, 4),
    (-216.0, 2, 1, 4),
    (2538.0, 2, 2, 4),
    (-1512.0, 2, 3, 4),
    (-540.0, 4, 0, 4),
    (-4860.0, 4, 1, 4),
    (729.0, 6, 0, 4),
    (576.0, 1, 3, 2),
    (2304.0, 1, 4, 2),
    (16.0, 3, 0, 2),
    (756.0, 3, 1, 2),
    (3240.0, 3, 2, 2),
    (864.0, 3, 3, 2),
    (-27.0, 5, 0, 2),
    (-972.0, 5, 1, 2),
    (-16.0, 0, 3, 0),
    (-192.0, 0, 4, 0),
    (-768.0, 0, 5, 0),
    (-1024.0, 0, 6, 0),
    (-16.0, 2, 1, 0),
    (-200.0, 2, 2, 0),
    (-832.0, 2, 3, 0),
    (-1152.0, 2, 4, 0),
    (27.0, 4, 1, 0),
    (216.0, 4, 2, 0),
    (432.0, 4, 3, 0),
];

/// `4782969 = 3^14`, the magnitude in the stated Hessian asymptotics.
pub const HESSIAN_CONSTANT: f64 = 4782969.0;

/// Constant in `Res(q, q') = K a^2 B1^3 B2`; `K = -2^10 3^22`.
pub const RESULTANT_CONSTANT: f64 = -32134205039616.0;

pub fn b1(alpha: f64, beta: f64, a: f64) -> f64 {
    let a2 = a * a;
    let (al2, al4) = (alpha * alpha, alpha.powi(4));
    729.0 * alpha * a2.powi(3)
        + 243.0 * (al2 - 3.0 * beta) * a2 * a2
        + 27.0 * alpha * (al2 - 15.0 * beta - 1.0) * a2
        + al4
        + 27.0 * beta * (3.0 * beta + 1.0).powi(2)
        - 36.0 * al2 * beta
}

/// `B2` from the monomial table, in plain f64.
pub fn b2(alpha: f64, beta: f64, a: f64) -> f64 {
    B2_TERMS.iter().map(|&(c, i, j, k)| c * alpha.powi(i as i32) * beta.powi(j as i32) * a.powi(k as i32)).sum()
}

/// `B2` grouped by powers of `a`, as an independent route to the same polynomial.
pub fn b2_factored(alpha: f64, beta: f64, a: f64) -> f64 {
    let (al, be) = (alpha, beta);
    let a2 = a * a;
    let p = |x: f64, n: i32| x.powi(n);
    let t10 = 729.0 * p(al, 3);
    let t8 = 729.0 * (3.0 * p(al, 4) - be * p(al, 2) - p(be, 3));
    let t6 = 27.0 * (81.0 * p(al, 5) + (8.0 - 171.0 * be) * p(al, 3) - 72.0 * p(be, 3) * al);
    let t4 = 27.0
        * (27.0 * p(al, 6) - 20.0 * (9.0 * be + 1.0) * p(al, 4) - 2.0 * be * (28.0 * be * be - 47.0 * be + 4.0) * p(al, 2)
            + 8.0 * p(be, 3) * (12.0 * be - 1.0));
    let t2 = -27.0 * (36.0 * be + 1.0) * p(al, 5)
        + 4.0 * (216.0 * p(be, 3) + 810.0 * be * be + 189.0 * be + 4.0) * p(al, 3)
        + 576.0 * p(be, 3) * (4.0 * be + 1.0) * al;
    let t0 = -be * p(4.0 * be + 1.0, 2) * (-27.0 * p(al, 4) + 8.0 * (9.0 * be + 2.0) * p(al, 2) + 16.0 * be * be * (4.0 * be + 1.0));
    ((((t10 * a2 + t8) * a2 + t6) * a2 + t4) * a2 + t2) * a2 + t0
}

// Double-double: an unevaluated sum hi + lo with |lo| <= ulp(hi) / 2.
#[derive(Clone, Copy, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        Dd { hi: s, lo: (a - (s - bb)) + (b - bb) }
    }

    fn quick(hi: f64, lo: f64) -> Dd {
        let s = hi + lo;
        Dd { hi: s, lo: lo - (s - hi) }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        Dd::quick(s.hi, s.lo + self.lo + o.lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p) + self.hi * o.lo + self.lo * o.hi;
        Dd::quick(p, e)
    }

    fn powi(self, n: u32) -> Dd {
        (0..n).fold(Dd::new(1.0), |acc, _| acc.mul(self))
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

fn falling(i: u32, d: u32) -> f64 {
    (0..d).map(|m| i.saturating_sub(m) as f64).product()
}

/// `∂^(da+db) B2 / ∂alpha^da ∂beta^db`, summed in double-double.
pub fn b2_partial(alpha: f64, beta: f64, a: f64, da: u32, db: u32) -> f64 {
    let (al, be, aa) = (Dd::new(alpha), Dd::new(beta), Dd::new(a));
    B2_TERMS
        .iter()
        .filter(|&&(_, i, j, _)| i >= da && j >= db)
        .fold(Dd::ZERO, |acc, &(c, i, j, k)| {
            let coef = c * falling(i, da) * falling(j, db);
            let term = Dd::new(coef).mul(al.powi(i - da)).mul(be.powi(j - db)).mul(aa.powi(k));
            acc.add(term)
        })
        .to_f64()
}

/// Gradient of `B2` in `(alpha, beta)`.
pub fn b2_gradient(alpha: f64, beta: f64, a: f64) -> [f64; 2] {
    [b2_partial(alpha, beta, a, 1, 0), b2_partial(alpha, beta, a, 0, 1)]
}

/// Second-derivative matrix of `B2` in `(alpha, beta)`.
pub fn b2_hessian(alpha: f64, beta: f64, a: f64) -> [[f64; 2]; 2] {
    let h11 = b2_partial(alpha, beta, a, 2, 0);
    let h12 = b2_partial(alpha, beta, a, 1, 1);
    let h22 = b2_partial(alpha, beta, a, 0, 2);
    [[h11, h12], [h12, h22]]
}

/// Truncated large-`a` expansions: `alpha0 = a^2 (-1 + a^(-4/3) + a^(-4)/27)`,
/// `beta0 = a^(4/3) (1 - a^(-4/3)/3)`.
pub fn initial_guess(a: f64) -> (f64, f64) {
    let s = a.powf(-4.0 / 3.0);
    let alpha0 = a * a * (-1.0 + s + a.powi(-4) / 27.0);
    let beta0 = a.powf(4.0 / 3.0) * (1.0 - s / 3.0);
    (alpha0, beta0)
}

/// Scale of the rescaled Hessian determinant, `3^(15/2) a^(40/3)`; gradients
/// and `B2` residuals are reported relative to it.
pub fn rescaled_norm(a: f64) -> f64 {
    3f64.powf(7.5) * a.powf(40.0 / 3.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuarticParameters {
    pub a: f64,
    pub alpha: f64,
    pub beta: f64,
    /// `|grad B2|` in `(u, v) = (alpha/a^2, beta/a^(4/3))`, over [`rescaled_norm`].
    pub grad_norm: f64,
    /// `|B2|` over [`rescaled_norm`].
    pub b2_residual: f64,
    /// Determinant of the `(alpha, beta)` Hessian of `B2`.
    pub hessian_det: f64,
    /// The same determinant in `(u, v)` units.
    pub hessian_det_rescaled: f64,
    pub b1: f64,
    pub iterations: usize,
}

impl QuarticParameters {
    /// `alpha / a^2`
    pub fn u(&self) -> f64 {
        self.alpha / (self.a * self.a)
    }

    /// `beta / a^(4/3)`
    pub fn v(&self) -> f64 {
        self.beta / self.a.powf(4.0 / 3.0)
    }

    /// `|det Hess| / (3^14 a^(80/3))`
    pub fn hessian_ratio(&self) -> f64 {
        self.hessian_det.abs() / (HESSIAN_CONSTANT * self.a.powf(80.0 / 3.0))
    }

    /// The Hessian is negative definite: the critical point is a local maximum.
    pub fn is_local_max(&self, a: f64) -> bool {
        let h = b2_hessian(self.alpha, self.beta, a);
        h[0][0] < 0.0 && self.hessian_det > 0.0
    }
}

const MAX_NEWTON: usize = 50;

/// Newton iteration on `grad B2 = 0` in rescaled variables, then checks that
/// the discriminant has the expected branch structure.
pub fn solve_parameters(a: f64, tol: f64) -> Result<(QuarticParameters, BranchStructure)> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("a = {a} must be positive")));
    }
    let (sa, sb) = (a * a, a.powf(4.0 / 3.0));
    let norm = rescaled_norm(a);
    let (alpha0, beta0) = initial_guess(a);
    let (mut u, mut v) = (alpha0 / sa, beta0 / sb);
    let mut trace = vec![[u, v]];
    let fail = |reason: String, trace: Vec<[f64; 2]>| Error::NoAdmissibleParameters { a, reason, trace };

    let grad_uv = |u: f64, v: f64| {
        let g = b2_gradient(u * sa, v * sb, a);
        [g[0] * sa, g[1] * sb]
    };

    let mut g = grad_uv(u, v);
    let mut iterations = 0;
    while g[0].hypot(g[1]) / norm > tol {
        if iterations == MAX_NEWTON {
            return Err(fail(format!("no convergence in {MAX_NEWTON} Newton steps"), trace));
        }
        let h = b2_hessian(u * sa, v * sb, a);
        let (h11, h12, h22) = (h[0][0] * sa * sa, h[0][1] * sa * sb, h[1][1] * sb * sb);
        let det = h11 * h22 - h12 * h12;
        if det == 0.0 || !det.is_finite() {
            return Err(fail("singular Hessian during Newton iteration".into(), trace));
        }
        let mut du = -(h22 * g[0] - h12 * g[1]) / det;
        let mut dv = -(h11 * g[1] - h12 * g[0]) / det;
        // keep steps inside the O(1) region of the rescaled variables
        let len = du.hypot(dv);
        if len > 0.25 {
            du *= 0.25 / len;
            dv *= 0.25 / len;
        }
        u += du;
        v += dv;
        iterations += 1;
        trace.push([u, v]);
        if !(u.is_finite() && v.is_finite()) {
            return Err(fail("Newton iterate left the finite range".into(), trace));
        }
        g = grad_uv(u, v);
    }

    let (alpha, beta) = (u * sa, v * sb);
    let h = b2_hessian(alpha, beta, a);
    let hessian_det = h[0][0] * h[1][1] - h[0][1] * h[0][1];
    let hessian_det_rescaled = hessian_det * (sa * sb).powi(2);
    let b2v = b2_partial(alpha, beta, a, 0, 0);
    let params = QuarticParameters {
        a,
        alpha,
        beta,
        grad_norm: g[0].hypot(g[1]) / norm,
        b2_residual: b2v.abs() / norm,
        hessian_det,
        hessian_det_rescaled,
        b1: b1(alpha, beta, a),
        iterations,
    };
    if hessian_det == 0.0 {
        return Err(fail("degenerate Hessian at the critical point".into(), trace));
    }
    if params.b2_residual > tol.max(1e-10) {
        return Err(fail(format!("critical point is not a zero of B2 (|B2| = {:e})", params.b2_residual), trace));
    }
    let curve = quartic_curve(a, alpha, beta)?;
    let q = discriminant_t(&curve);
    match branch_points(&q, a, 1e-6) {
        Ok(branch) => Ok((params, branch)),
        Err(e) => Err(fail(e.to_string(), trace)),
    }
}

/// One evaluation of `Res(q, q') / (B1 B2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    pub resultant: Scaled,
    pub b1: f64,
    pub b2: f64,
    /// `Res / (B1 B2)`, or `None` when either side vanishes.
    pub ratio: Option<f64>,
    /// `Res / (a^2 B1^3 B2)`.
    pub corrected_ratio: Option<f64>,
}

pub fn resultant_identity_check(alpha: f64, beta: f64, a: f64) -> Result<IdentityCheck> {
    let curve = quartic_curve(a, alpha, beta)?;
    let q = discriminant_t(&curve);
    let res = resultant(&q, &q.derivative())?;
    let (v1, v2) = (b1(alpha, beta, a), b2_factored(alpha, beta, a));
    let degenerate = res.is_zero() || v1 == 0.0 || v2 == 0.0;
    let ratio = (!degenerate).then(|| res.ratio(Scaled::one().mul_f64(v1).mul_f64(v2)));
    let corrected_ratio = (!degenerate).then(|| res.ratio(Scaled::one().mul_f64(a * a).mul_f64(v1.powi(3)).mul_f64(v2)));
    Ok(IdentityCheck { alpha, beta, a, resultant: res, b1: v1, b2: v2, ratio, corrected_ratio })
}

/// Calibration of one global constant over a seeded random sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentitySweep {
    pub points: usize,
    pub skipped: usize,
    /// Median of `Res / (B1 B2)`.
    pub kappa: f64,
    /// Worst `|ratio / kappa - 1|`.
    pub max_rel_dev: f64,
    /// Median of `Res / (a^2 B1^3 B2)`.
    pub corrected_kappa: f64,
    pub corrected_max_rel_dev: f64,
    pub checks: Vec<IdentityCheck>,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Sweep over `(alpha, beta, a)` uniform in `[-2, 2]^2 x [0.5, 3]`.
pub fn identity_sweep(points: usize, seed: u64) -> Result<IdentitySweep> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<(f64, f64, f64)> =
        (0..points).map(|_| (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(0.5..3.0))).collect();
    let checks = draws.par_iter().map(|&(al, be, a)| resultant_identity_check(al, be, a)).collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = checks.iter().filter_map(|c| c.ratio).collect();
    let corrected: Vec<f64> = checks.iter().filter_map(|c| c.corrected_ratio).collect();
    let kappa = median(ratios.clone());
    let corrected_kappa = median(corrected.clone());
    let dev = |v: &[f64], k: f64| v.iter().map(|r| (r / k - 1.0).abs()).fold(0.0, f64::max);
    Ok(IdentitySweep {
        points,
        skipped: points - ratios.len(),
        kappa,
        max_rel_dev: dev(&ratios, kappa),
        corrected_kappa,
        corrected_max_rel_dev: dev(&corrected, corrected_kappa),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn b_factors_vanish_at_origin() {
        for a in [0.5, 1.0, 7.0] {
            assert_eq!(b1(0.0, 0.0, a), 0.0);
            assert_eq!(b2(0.0, 0.0, a), 0.0);
        }
    }

    #[test]
    fn b1_hand_value() {
        assert_eq!(b1(1.0, 0.0, 1.0), 973.0);
    }

    #[test]
    fn initial_guess_values() {
        let (al, be) = initial_guess(10.0);
        assert!((al + 95.358).abs() < 1e-3, "{al}");
        assert!((be - 21.211).abs() < 1e-3, "{be}");
        let a = 1e6;
        let (al, be) = initial_guess(a);
        assert!((al / (a * a) + 1.0).abs() < 1e-7);
        assert!((be / a.powf(4.0 / 3.0) - 1.0).abs() < 1e-7);
    }

    #[test]
    fn solve_at_ten() {
        let (p, br) = solve_parameters(10.0, 1e-12).unwrap();
        assert!((p.alpha + 95.358_029_066_749_24).abs() < 1e-9, "{}", p.alpha);
        assert!((p.beta - 21.211_041_438_356_034).abs() < 1e-9, "{}", p.beta);
        assert!(p.grad_norm <= 1e-12);
        assert!(p.b1 != 0.0);
        assert!(p.is_local_max(10.0));
        assert!((br.gamma1 * br.gamma1 - 3.0542333).abs() < 1e-6);
        assert!((br.gamma2 * br.gamma2 - 6.3039077).abs() < 1e-6);
    }

    #[test]
    fn solve_is_deterministic() {
        let x = solve_parameters(20.0, 1e-12).unwrap().0;
        let y = solve_parameters(20.0, 1e-12).unwrap().0;
        assert_eq!(serde_json::to_string(&x).unwrap(), serde_json::to_string(&y).unwrap());
    }

    #[test]
    fn solve_reference_values() {
        for (a, al, be) in [(20.0, -392.631_843_262_565_7, 53.955_023_265_595_315), (50.0, -2_486.427_897_048_447, 183.868_241_964_523_43)]
        {
            let p = solve_parameters(a, 1e-12).unwrap().0;
            assert!((p.alpha / al - 1.0).abs() < 1e-12, "a={a}: {}", p.alpha);
            assert!((p.beta / be - 1.0).abs() < 1e-12, "a={a}: {}", p.beta);
        }
    }

    #[test]
    fn tiny_a_is_reported_not_panicking() {
        assert!(matches!(solve_parameters(0.1, 1e-12), Err(Error::NoAdmissibleParameters { .. })));
        assert!(solve_parameters(-1.0, 1e-12).is_err());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let a: f64 = 10.0;
        let (sa, sb) = (a * a, a.powf(4.0 / 3.0));
        let (al, be) = initial_guess(a);
        let (u, v) = (al / sa, be / sb);
        let h = 1e-6;
        let f = |u: f64, v: f64| b2_partial(u * sa, v * sb, a, 0, 0);
        let fd = [(f(u + h, v) - f(u - h, v)) / (2.0 * h), (f(u, v + h) - f(u, v - h)) / (2.0 * h)];
        let g = b2_gradient(al, be, a);
        let an = [g[0] * sa, g[1] * sb];
        for k in 0..2 {
            assert!((fd[k] / an[k] - 1.0).abs() < 1e-4, "{k}: {} vs {}", fd[k], an[k]);
        }
    }

    #[test]
    fn square_factor_at_solution() {
        let (p, _) = solve_parameters(10.0, 1e-12).unwrap();
        let q = discriminant_t(&quartic_curve(10.0, p.alpha, p.beta).unwrap());
        let br = branch_points(&q, 10.0, 1e-6).unwrap();
        assert!(br.factor_residual <= 1e-6);
    }

    #[test]
    fn identity_holds_in_corrected_form() {
        let c = resultant_identity_check(0.0, 0.0, 1.0).unwrap();
        assert!(c.ratio.is_none());
        let s = identity_sweep(40, 11).unwrap();
        assert!((s.corrected_kappa / RESULTANT_CONSTANT - 1.0).abs() < 1e-6);
        assert!(s.corrected_max_rel_dev < 1e-6, "{}", s.corrected_max_rel_dev);
    }

    proptest! {
        #[test]
        fn table_matches_grouped_form(al in -3.0f64..3.0, be in -3.0f64..3.0, a in 0.3f64..4.0) {
            let x = b2(al, be, a);
            let y = b2_factored(al, be, a);
            let scale: f64 = B2_TERMS.iter()
                .map(|&(c, i, j, k)| (c * al.powi(i as i32) * be.powi(j as i32) * a.powi(k as i32)).abs())
                .sum();
            prop_assert!((x - y).abs() <= 1e-13 * scale);
            let z = b2_partial(al, be, a, 0, 0);
            prop_assert!((x - z).abs() <= 1e-13 * scale);
        }
    }
}
