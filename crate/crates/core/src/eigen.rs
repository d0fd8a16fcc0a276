//! Eigenvalues of dense complex Hermitian matrices: Householder reduction to
//! a real symmetric tridiagonal matrix, then implicit-shift QL.

use num_complex::Complex64;

use crate::error::{Error, Result};

type C = Complex64;

/// Dense square matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<C>,
}

impl HermitianMatrix {
    pub fn zeros(n: usize) -> Self {
        HermitianMatrix { n, data: vec![C::new(0.0, 0.0); n * n] }
    }

    /// From row-major entries; only the lower triangle is read and the upper
    /// triangle is rebuilt from it.
    pub fn from_lower(n: usize, data: Vec<C>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidArgument(format!("expected {} entries, got {}", n * n, data.len())));
        }
        let mut m = HermitianMatrix { n, data };
        for i in 0..n {
            m.data[i * n + i].im = 0.0;
            for j in 0..i {
                m.data[j * n + i] = m.data[i * n + j].conj();
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> C {
        self.data[i * self.n + j]
    }

    /// Sets `(i, j)` and its mirror `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: C) {
        let n = self.n;
        if i == j {
            self.data[i * n + i] = C::new(v.re, 0.0);
        } else {
            self.data[i * n + j] = v;
            self.data[j * n + i] = v.conj();
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.data[i * self.n + i].re).sum()
    }

    /// Unitarily similar real symmetric tridiagonal matrix: `(diag, offdiag)`.
    pub fn tridiagonalize(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.n;
        let mut a = self.data.clone();
        let mut v = vec![C::new(0.0, 0.0); n];
        let mut p = vec![C::new(0.0, 0.0); n];
        let mut off = vec![0.0; n.saturating_sub(1)];
        for k in 0..n.saturating_sub(1) {
            let m = k + 1;
            let x0 = a[m * n + k];
            let tail = (m + 1..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>();
            if tail == 0.0 {
                // only the phase of x0 is left, and |x0| is unitarily equivalent
                off[k] = x0.norm();
                continue;
            }
            let norm = (tail + x0.norm_sqr()).sqrt();
            // v = x - alpha e1 with alpha = -phase(x0) |x|, then normalized
            let phase = if x0.norm() == 0.0 { C::new(1.0, 0.0) } else { x0 / x0.norm() };
            let alpha = -phase * norm;
            for i in m..n {
                v[i] = a[i * n + k];
            }
            v[m] -= alpha;
            let vn = (m..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
            if vn == 0.0 {
                off[k] = norm;
                continue;
            }
            for vi in &mut v[m..n] {
                *vi /= vn;
            }
            // p = A v on the trailing block
            for i in m..n {
                let row = &a[i * n + m..i * n + n];
                p[i] = row.iter().zip(&v[m..n]).map(|(x, y)| x * y).sum();
            }
            let vp: C = (m..n).map(|i| v[i].conj() * p[i]).sum();
            let vp = vp.re;
            for i in m..n {
                p[i] -= v[i] * vp;
            }
            // A <- A - 2 (v p* + p v*)
            for i in m..n {
                let (vi, pi) = (v[i], p[i]);
                for j in m..n {
                    a[i * n + j] -= (vi * p[j].conj() + pi * v[j].conj()) * 2.0;
                }
            }
            off[k] = norm;
            a[m * n + k] = alpha;
            for i in m + 1..n {
                a[i * n + k] = C::new(0.0, 0.0);
            }
        }
        let diag = (0..n).map(|i| a[i * n + i].re).collect();
        (diag, off)
    }

    /// All eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let (d, e) = self.tridiagonalize();
        tridiagonal_eigenvalues(d, e)
    }
}

const MAX_QL_SWEEPS: usize = 60;

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e`, sorted increasingly.
pub fn tridiagonal_eigenvalues(mut d: Vec<f64>, e: Vec<f64>) -> Result<Vec<f64>> {
    let n = d.len();
    if e.len() + 1 != n.max(1) {
        return Err(Error::InvalidArgument(format!("off-diagonal has length {}, expected {}", e.len(), n.saturating_sub(1))));
    }
    let mut e = e;
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_SWEEPS {
                return Err(Error::InvalidArgument(format!("QL iteration did not converge for eigenvalue {l}")));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}
