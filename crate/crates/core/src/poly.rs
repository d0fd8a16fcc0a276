//! Dense univariate polynomials with real coefficients.
//!
//! Coefficients are stored in ascending degree. Root finding uses the
//! Aberth–Ehrlich simultaneous iteration and works for complex coefficient
//! vectors as well, which is what the sheet evaluator needs for a cubic in `w`
//! at complex `z`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ABERTH_MAX_ITER: usize = 500;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut coeffs = coeffs.into();
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Self {
        Poly::new(vec![c])
    }

    /// `c * z^k`
    pub fn monomial(c: f64, k: usize) -> Self {
        let mut v = vec![0.0; k + 1];
        v[k] = c;
        Poly::new(v)
    }

    /// Monic polynomial with the given real roots.
    pub fn from_roots(roots: &[f64]) -> Self {
        roots.iter().fold(Poly::constant(1.0), |acc, &r| &acc * &Poly::new(vec![-r, 1.0]))
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    pub fn lead(&self) -> f64 {
        self.coeffs[self.coeffs.len() - 1]
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `sum |c_k| |z|^k`, the natural scale for relative residuals.
    pub fn abs_scale(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c.abs())
    }

    pub fn derivative(&self) -> Poly {
        if self.degree() == 0 {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect::<Vec<_>>())
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Poly {
        let mut v = vec![0.0];
        v.extend(self.coeffs.iter().enumerate().map(|(k, &c)| c / (k + 1) as f64));
        Poly::new(v)
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect::<Vec<_>>())
    }

    /// `p(z^2)`
    pub fn substitute_square(&self) -> Poly {
        let mut v = vec![0.0; 2 * self.coeffs.len() - 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            v[2 * k] = c;
        }
        Poly::new(v)
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|&c| c == 0.0)
    }

    pub fn is_odd(&self) -> bool {
        self.coeffs.iter().step_by(2).all(|&c| c == 0.0)
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(Error::InvalidArgument("division by the zero polynomial".into()));
        }
        if self.degree() < d.degree() {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let dd = d.degree();
        let lead = d.lead();
        let mut quot = vec![0.0; self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd] / lead;
            quot[k] = c;
            for (i, &dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= c * dc;
            }
        }
        rem.truncate(dd.max(1));
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn complex_coeffs(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect::<Vec<_>>())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect::<Vec<_>>())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut v = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// Roots of a polynomial, with clustered roots merged into multiplicities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub multiplicities: Vec<usize>,
    pub residuals: Vec<f64>,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    pub fn has_multiple_root(&self) -> bool {
        self.multiplicities.iter().any(|&m| m >= 2)
    }
}

fn horner_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// `|p(z)| / sum |c_k||z|^k`
pub fn relative_residual(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    let mut p = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for &c in coeffs.iter().rev() {
        p = p * z + c;
        scale = scale * r + c.norm();
    }
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

/// All complex roots of `sum coeffs[k] z^k` by Aberth–Ehrlich iteration,
/// one entry per root counted with multiplicity. Exact zero roots are
/// factored out before iterating.
pub fn aberth(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut end = coeffs.len();
    while end > 0 && coeffs[end - 1] == Complex64::new(0.0, 0.0) {
        end -= 1;
    }
    if end == 0 {
        return Err(Error::InvalidArgument("roots of the zero polynomial".into()));
    }
    let zeros = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let c = &coeffs[zeros..end];
    let n = c.len() - 1;
    let mut out = vec![Complex64::new(0.0, 0.0); zeros];
    match n {
        0 => return Ok(out),
        1 => {
            out.push(-c[0] / c[1]);
            return Ok(out);
        }
        _ => {}
    }

    // Initial guesses on a circle of radius |c0/cn|^(1/n), rotated off the axes.
    let radius = (c[0].norm() / c[n].norm()).powf(1.0 / n as f64);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();

    let mut done = vec![false; n];
    for _ in 0..ABERTH_MAX_ITER {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = horner_with_derivative(c, z[i]);
            if p.norm() == 0.0 {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if !w.is_finite() {
                continue;
            }
            z[i] -= w;
            if w.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            out.extend(z);
            return Ok(out);
        }
    }

    // Roots of higher multiplicity stall above the eps-level step criterion;
    // accept them when the backward error is small.
    let worst = z.iter().map(|&r| relative_residual(c, r)).fold(0.0, f64::max);
    if worst <= 1e3 * f64::EPSILON * n as f64 {
        out.extend(z);
        return Ok(out);
    }
    out.extend(z);
    Err(Error::RootsNotConverged { iterations: ABERTH_MAX_ITER, worst_residual: worst, partial: out })
}

/// Roots of `p`; roots closer than `1e-6 * (1 + |r|)` are merged into one
/// entry carrying their multiplicity.
pub fn roots(p: &Poly, tol: f64) -> Result<RootSet> {
    if p.is_zero() {
        return Err(Error::InvalidArgument("roots of the zero polynomial".into()));
    }
    let c = p.complex_coeffs();
    let raw = aberth(&c)?;
    let worst = raw.iter().map(|&r| relative_residual(&c, r)).fold(0.0, f64::max);
    if worst > tol {
        return Err(Error::RootsNotConverged { iterations: ABERTH_MAX_ITER, worst_residual: worst, partial: raw });
    }
    Ok(cluster(&c, &raw))
}

fn cluster(coeffs: &[Complex64], raw: &[Complex64]) -> RootSet {
    let n = raw.len();
    let mut group: Vec<usize> = (0..n).collect();
    fn find(g: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while g[r] != r {
            r = g[r];
        }
        g[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let radius = 1e-6 * (1.0 + raw[i].norm().max(raw[j].norm()));
            if (raw[i] - raw[j]).norm() < radius {
                let (a, b) = (find(&mut group, i), find(&mut group, j));
                if a != b {
                    group[b] = a;
                }
            }
        }
    }
    let mut reps: Vec<usize> = Vec::new();
    let mut roots = Vec::new();
    let mut multiplicities = Vec::new();
    for i in 0..n {
        let r = find(&mut group, i);
        match reps.iter().position(|&x| x == r) {
            Some(k) => {
                roots[k] += raw[i];
                multiplicities[k] += 1;
            }
            None => {
                reps.push(r);
                roots.push(raw[i]);
                multiplicities.push(1);
            }
        }
    }
    for (r, &m) in roots.iter_mut().zip(&multiplicities) {
        *r /= m as f64;
    }
    let residuals = roots.iter().map(|&r| relative_residual(coeffs, r)).collect();
    RootSet { roots, multiplicities, residuals }
}

/// A real number held as `mantissa * 2^exponent`, for determinants whose
/// magnitude leaves the f64 range.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scaled {
    pub mantissa: f64,
    pub exponent: i32,
}

impl Scaled {
    pub fn one() -> Self {
        Scaled { mantissa: 1.0, exponent: 0 }
    }

    pub fn zero() -> Self {
        Scaled { mantissa: 0.0, exponent: 0 }
    }

    fn normalize(mut self) -> Self {
        if self.mantissa == 0.0 || !self.mantissa.is_finite() {
            return self;
        }
        let e = self.mantissa.abs().log2().floor() as i32;
        self.mantissa *= 2f64.powi(-e);
        self.exponent += e;
        self
    }

    pub fn mul_f64(self, x: f64) -> Self {
        Scaled { mantissa: self.mantissa * x, exponent: self.exponent }.normalize()
    }

    pub fn to_f64(self) -> f64 {
        self.mantissa * 2f64.powi(self.exponent)
    }

    pub fn is_zero(self) -> bool {
        self.mantissa == 0.0
    }

    /// `self / other` as a plain f64.
    pub fn ratio(self, other: Scaled) -> f64 {
        (self.mantissa / other.mantissa) * 2f64.powi(self.exponent - other.exponent)
    }
}

/// Sylvester matrix of `(p, q)`, rows of `p` first, coefficients descending.
pub fn sylvester_matrix(p: &Poly, q: &Poly) -> Vec<Vec<f64>> {
    let (m, n) = (p.degree(), q.degree());
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![0.0; size];
        for k in 0..=m {
            row[i + k] = p.coeff(m - k);
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![0.0; size];
        for k in 0..=n {
            row[i + k] = q.coeff(n - k);
        }
        rows.push(row);
    }
    rows
}

/// Determinant by LU with partial pivoting, accumulated in scaled form.
pub fn determinant(mut a: Vec<Vec<f64>>) -> Scaled {
    let n = a.len();
    let mut det = Scaled::one();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        if a[pivot][col] == 0.0 {
            return Scaled::zero();
        }
        if pivot != col {
            a.swap(pivot, col);
            det = det.mul_f64(-1.0);
        }
        let d = a[col][col];
        det = det.mul_f64(d);
        for row in (col + 1)..n {
            let f = a[row][col] / d;
            if f != 0.0 {
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
            }
        }
    }
    det
}

/// Resultant of `p` and `q`: the Sylvester determinant, so that
/// `Res(p, q) = lead(p)^deg q * prod q(root_i of p)`.
pub fn resultant(p: &Poly, q: &Poly) -> Result<Scaled> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::InvalidArgument("resultant with the zero polynomial".into()));
    }
    match (p.degree(), q.degree()) {
        (0, 0) => Ok(Scaled::one()),
        (0, n) => Ok((0..n).fold(Scaled::one(), |acc, _| acc.mul_f64(p.lead()))),
        (m, 0) => Ok((0..m).fold(Scaled::one(), |acc, _| acc.mul_f64(q.lead()))),
        _ => Ok(determinant(sylvester_matrix(p, q))),
    }
}

/// Splits `p = lead * (prod of simple factors) * s(t)^2` and returns the
/// monic `s` with the sup-norm coefficient mismatch relative to `||p||`.
pub fn extract_square_factor(p: &Poly, simple_roots: &[Complex64], tol: f64) -> Result<(Poly, f64)> {
    let k = simple_roots.len();
    if p.degree() < k || !(p.degree() - k).is_multiple_of(2) || p.degree() == k {
        return Err(Error::InvalidArgument(format!("degree {} with {} simple roots leaves no even square part", p.degree(), k)));
    }
    // Product of the simple factors, computed in complex arithmetic.
    let mut prod = vec![Complex64::new(1.0, 0.0)];
    for &r in simple_roots {
        let mut next = vec![Complex64::new(0.0, 0.0); prod.len() + 1];
        for (i, &c) in prod.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * r;
        }
        prod = next;
    }
    let imag = prod.iter().fold(0.0f64, |m, c| m.max(c.im.abs()));
    let real = prod.iter().fold(0.0f64, |m, c| m.max(c.re.abs()));
    if imag > 1e-10 * real {
        return Err(Error::InvalidArgument("simple roots must be closed under conjugation".into()));
    }
    let simple = Poly::new(prod.iter().map(|c| c.re).collect::<Vec<_>>());
    let (quot, _) = p.divrem(&simple)?;
    let quot = quot.scale(1.0 / p.lead());

    // Monic square root of the quotient, coefficient by coefficient from the top.
    let d = quot.degree() / 2;
    let mut s = vec![0.0; d + 1];
    s[d] = 1.0;
    for k in (0..d).rev() {
        // coefficient of t^(d + k) in s^2
        let idx = d + k;
        let mut acc = 0.0;
        for i in (k + 1)..=d {
            let j = idx - i;
            if j <= d && j > k {
                acc += s[i] * s[j];
            }
        }
        s[k] = (quot.coeff(idx) - acc) / 2.0;
    }
    let s = Poly::new(s);
    let rebuilt = &(&simple * &(&s * &s)).scale(p.lead()) - p;
    let residual = rebuilt.norm_inf() / p.norm_inf();
    if residual > tol {
        return Err(Error::NoSquareStructure { residual, tol });
    }
    Ok((s, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted_real(rs: &RootSet) -> Vec<f64> {
        let mut v: Vec<f64> = rs.roots.iter().map(|r| r.re).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn eval_examples() {
        let p = Poly::new(vec![0.0, -3.0, 0.0, 1.0]);
        assert_eq!(p.eval_complex(c(2.0, 0.0)), c(2.0, 0.0));
        assert_eq!(Poly::constant(1.0).eval_complex(c(5.0, 2.0)), c(1.0, 0.0));
        assert_eq!(Poly::new(vec![1.0, 0.0, 1.0]).eval_complex(c(0.0, 1.0)), c(0.0, 0.0));
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = Poly::new(vec![1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 1);
        assert!(Poly::new(Vec::<f64>::new()).is_zero());
        assert_eq!(Poly::new(vec![0.0, 0.0]).coeffs(), &[0.0]);
    }

    #[test]
    fn roots_examples() {
        let rs = roots(&Poly::new(vec![-1.0, 0.0, 1.0]), 1e-12).unwrap();
        let v = sorted_real(&rs);
        assert!((v[0] + 1.0).abs() < 1e-14 && (v[1] - 1.0).abs() < 1e-14);

        let rs = roots(&Poly::monomial(1.0, 3), 1e-12).unwrap();
        assert_eq!(rs.roots, vec![c(0.0, 0.0)]);
        assert_eq!(rs.multiplicities, vec![3]);

        let rs = roots(&Poly::from_roots(&[1.0, 2.0, 3.0]), 1e-12).unwrap();
        let v = sorted_real(&rs);
        for (got, want) in v.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert_eq!(rs.total_multiplicity(), 3);
    }

    #[test]
    fn double_root_is_merged() {
        let p = Poly::from_roots(&[1.5, 1.5, -2.0]);
        let rs = roots(&p, 1e-12).unwrap();
        assert_eq!(rs.total_multiplicity(), 3);
        assert!(rs.has_multiple_root());
        let k = rs.multiplicities.iter().position(|&m| m == 2).unwrap();
        assert!((rs.roots[k] - c(1.5, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(roots(&Poly::zero(), 1e-12).is_err());
        assert!(resultant(&Poly::zero(), &Poly::constant(1.0)).is_err());
    }

    #[test]
    fn resultant_examples() {
        let r = resultant(&Poly::new(vec![-3.0, 1.0]), &Poly::new(vec![-1.0, 1.0])).unwrap();
        assert!((r.to_f64() - 2.0).abs() < 1e-14);
        let r = resultant(&Poly::new(vec![-1.0, 0.0, 1.0]), &Poly::new(vec![0.0, 2.0])).unwrap();
        assert!((r.to_f64() + 4.0).abs() < 1e-14);
        // q(t; 0, 0, 1) has a root at t = 0, shared with its derivative.
        let q = Poly::new(vec![0.0, 0.0, 0.0, -279.0, -162.0, 9.0, 36.0]);
        assert_eq!(resultant(&q, &q.derivative()).unwrap().to_f64(), 0.0);
    }

    #[test]
    fn resultant_survives_overflow() {
        let p = Poly::new(vec![1e200, 1.0]);
        let q = Poly::new(vec![1e200, 0.0, 1.0]);
        // Res = q(-1e200) = 1e400 + 1e200
        let r = resultant(&p, &q).unwrap();
        assert!(r.to_f64().is_infinite());
        let log10 = r.mantissa.abs().log10() + r.exponent as f64 * 2f64.log10();
        assert!((log10 - 400.0).abs() < 1e-9);
    }

    #[test]
    fn square_factor_constructed() {
        let s = Poly::new(vec![1.0, 1.0, 1.0]);
        let p = (&Poly::from_roots(&[1.0, 2.0]) * &(&s * &s)).scale(4.0);
        let (quad, res) = extract_square_factor(&p, &[c(1.0, 0.0), c(2.0, 0.0)], 1e-10).unwrap();
        assert!((&quad - &s).norm_inf() < 1e-12);
        assert!(res < 1e-14);
    }

    #[test]
    fn square_factor_detects_noise() {
        let s = Poly::new(vec![1.0, 1.0, 1.0]);
        let mut coeffs = (&Poly::from_roots(&[1.0, 2.0]) * &(&s * &s)).scale(4.0).coeffs().to_vec();
        let norm = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        coeffs[1] += 1e-3 * norm;
        let p = Poly::new(coeffs);
        let (_, res) = extract_square_factor(&p, &[c(1.0, 0.0), c(2.0, 0.0)], 1.0).unwrap();
        assert!(res > 1e-4 && res < 1e-2, "residual {res}");
        assert!(matches!(extract_square_factor(&p, &[c(1.0, 0.0), c(2.0, 0.0)], 1e-6), Err(Error::NoSquareStructure { .. })));
    }

    #[test]
    fn divrem_reconstructs() {
        let p = Poly::new(vec![3.0, -1.0, 4.0, 1.0, -5.0, 9.0]);
        let d = Poly::new(vec![2.0, 6.0, -5.0]);
        let (q, r) = p.divrem(&d).unwrap();
        assert!(r.degree() < d.degree());
        assert!((&(&q * &d) + &r - p.clone()).norm_inf() < 1e-12);
    }

    #[test]
    fn resultant_vanishes_iff_multiple_root() {
        let with = Poly::from_roots(&[0.3, 0.3, -1.2, 2.0]);
        let without = Poly::from_roots(&[0.3, 0.7, -1.2, 2.0]);
        let rw = resultant(&with, &with.derivative()).unwrap().to_f64();
        let ro = resultant(&without, &without.derivative()).unwrap().to_f64();
        assert!(rw.abs() < 1e-12);
        assert!(ro.abs() > 1e-3);
        assert!(roots(&with, 1e-10).unwrap().has_multiple_root());
        assert!(!roots(&without, 1e-10).unwrap().has_multiple_root());
    }

    fn unit_disk_point() -> impl Strategy<Value = Complex64> {
        (0.0f64..1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    fn real_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec(-3.0f64..3.0, 1..=max_deg + 1)
            .prop_filter("nonzero lead", |v| v.last().is_some_and(|c| c.abs() > 0.1))
            .prop_map(Poly::new)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn recovers_roots_in_unit_disk(rs in prop::collection::vec(unit_disk_point(), 1..=8)) {
            let min_gap = (0..rs.len())
                .flat_map(|i| ((i + 1)..rs.len()).map(move |j| (i, j)))
                .map(|(i, j)| (rs[i] - rs[j]).norm())
                .fold(f64::INFINITY, f64::min);
            prop_assume!(min_gap > 1e-2);
            let mut coeffs = vec![c(1.0, 0.0)];
            for &r in &rs {
                let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
                for (i, &cc) in coeffs.iter().enumerate() {
                    next[i + 1] += cc;
                    next[i] -= cc * r;
                }
                coeffs = next;
            }
            let found = aberth(&coeffs).unwrap();
            for r in &rs {
                let best = found.iter().map(|f| (f - r).norm()).fold(f64::INFINITY, f64::min);
                prop_assert!(best < 1e-8, "root {r} missed by {best}");
            }
        }

        #[test]
        fn resultant_antisymmetry(p in real_poly(5), q in real_poly(5)) {
            let rpq = resultant(&p, &q).unwrap().to_f64();
            let rqp = resultant(&q, &p).unwrap().to_f64();
            let sign = if (p.degree() * q.degree()) % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!((rpq - sign * rqp).abs() <= 1e-9 * (1.0 + rpq.abs()));
        }

        #[test]
        fn eval_is_a_ring_homomorphism(p in real_poly(6), q in real_poly(6), re in -2.0f64..2.0, im in -2.0f64..2.0) {
            let z = c(re, im);
            let (pz, qz) = (p.eval_complex(z), q.eval_complex(z));
            let sum = (&p + &q).eval_complex(z);
            let prod = (&p * &q).eval_complex(z);
            let scale = 1.0 + p.abs_scale(z.norm()) * (1.0 + q.abs_scale(z.norm()));
            prop_assert!((sum - (pz + qz)).norm() <= 1e-12 * scale);
            prop_assert!((prod - pz * qz).norm() <= 1e-12 * scale);
        }
    }
}
