//! External fields and the cubic spectral curves they produce.
//!
//! A curve is stored as `w^3 - c2(z) w^2 + c1(z) w - c0(z) = 0`. Its three
//! roots at large `z` behave like `-a + x1/z`, `a + x2/z` and `V'(z) - 1/z`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// A polynomial potential `V` with a two-level source `diag(a, .., -a, ..)`
/// split in fractions `x1`, `x2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExternalField {
    pub v: Poly,
    pub a: f64,
    pub x1: f64,
    pub x2: f64,
}

impl ExternalField {
    pub fn new(v: Poly, a: f64, x2: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidArgument(format!("source strength a = {a} must be positive")));
        }
        if !(x2 > 0.0 && x2 < 1.0) {
            return Err(Error::InvalidArgument(format!("fraction x2 = {x2} must lie in (0, 1)")));
        }
        if v.degree() < 2 || v.lead() <= 0.0 {
            return Err(Error::InvalidArgument("V must have degree >= 2 and positive leading coefficient".into()));
        }
        Ok(ExternalField { v, a, x1: 1.0 - x2, x2 })
    }

    /// `V(z) = z^2 / 2`
    pub fn gaussian(a: f64, x2: f64) -> Result<Self> {
        ExternalField::new(Poly::new(vec![0.0, 0.0, 0.5]), a, x2)
    }

    /// `V(z) = z^4 / 4`, equal fractions.
    pub fn quartic(a: f64) -> Result<Self> {
        ExternalField::new(Poly::monomial(0.25, 4), a, 0.5)
    }

    pub fn v_prime(&self) -> Poly {
        self.v.derivative()
    }

    /// `V_1' = V' + a`
    pub fn v1_prime(&self) -> Poly {
        &self.v_prime() + &Poly::constant(self.a)
    }

    /// `V_2' = V' - a`
    pub fn v2_prime(&self) -> Poly {
        &self.v_prime() - &Poly::constant(self.a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Gaussian,
    Quartic,
    General,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralCurve {
    pub c2: Poly,
    pub c1: Poly,
    pub c0: Poly,
    pub a: f64,
    pub field: FieldKind,
}

/// `w^3 - z w^2 - (a^2 - 1) w + a^2 z + a (2 x2 - 1) = 0`
pub fn gaussian_curve(a: f64, x2: f64) -> Result<SpectralCurve> {
    ExternalField::gaussian(a, x2)?;
    Ok(SpectralCurve {
        c2: Poly::new(vec![0.0, 1.0]),
        c1: Poly::constant(-(a * a - 1.0)),
        c0: Poly::new(vec![-a * (2.0 * x2 - 1.0), -a * a]),
        a,
        field: FieldKind::Gaussian,
    })
}

/// `w^3 - z^3 w^2 + (z^2 + alpha) w + a^2 z^3 + beta z = 0`
pub fn quartic_curve(a: f64, alpha: f64, beta: f64) -> Result<SpectralCurve> {
    ExternalField::quartic(a)?;
    Ok(SpectralCurve {
        c2: Poly::monomial(1.0, 3),
        c1: Poly::new(vec![alpha, 0.0, 1.0]),
        c0: Poly::new(vec![0.0, -beta, 0.0, -a * a]),
        a,
        field: FieldKind::Quartic,
    })
}

/// Curve for a polynomial field of degree `d` with the free lower-order
/// coefficients supplied as tails: `c1_tail` covers `z^0..z^(d-3)` and
/// `c0_tail` covers `z^0..z^(d-2)`.
///
/// The leading terms are forced: `c1 = lead(V') z^(d-2) + tail - a^2` and
/// `c0 = -a^2 lead(V') z^(d-1) + tail`. The fraction `x2` implied by the
/// tails must agree with the field.
pub fn general_curve(field: &ExternalField, c1_tail: &[f64], c0_tail: &[f64]) -> Result<SpectralCurve> {
    let d = field.v.degree();
    if c1_tail.len() != d - 2 || c0_tail.len() != d - 1 {
        return Err(Error::InvalidArgument(format!(
            "degree {d} needs tails of length {} and {}, got {} and {}",
            d - 2,
            d - 1,
            c1_tail.len(),
            c0_tail.len()
        )));
    }
    let vp = field.v_prime();
    let a2 = field.a * field.a;
    let mut c1 = vec![0.0; d - 1];
    c1[..d - 2].copy_from_slice(c1_tail);
    c1[d - 2] += vp.lead();
    c1[0] -= a2;
    let mut c0 = vec![0.0; d];
    c0[..d - 1].copy_from_slice(c0_tail);
    c0[d - 1] = -a2 * vp.lead();
    let curve = SpectralCurve { c2: vp, c1: Poly::new(c1), c0: Poly::new(c0), a: field.a, field: FieldKind::General };
    let implied = curve.x2();
    if (implied - field.x2).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("tails imply x2 = {implied}, field has x2 = {}", field.x2)));
    }
    Ok(curve)
}

impl SpectralCurve {
    /// `w^3 - c2(z) w^2 + c1(z) w - c0(z)`
    pub fn residual(&self, z: Complex64, w: Complex64) -> Complex64 {
        let (c2, c1, c0) = self.coeffs_at(z);
        ((w - c2) * w + c1) * w - c0
    }

    /// `|residual| / (|w|^3 + |c2||w|^2 + |c1||w| + |c0|)`
    pub fn relative_residual(&self, z: Complex64, w: Complex64) -> f64 {
        let (c2, c1, c0) = self.coeffs_at(z);
        let r = w.norm();
        let scale = r * r * r + c2.norm() * r * r + c1.norm() * r + c0.norm();
        let res = (((w - c2) * w + c1) * w - c0).norm();
        if scale == 0.0 {
            res
        } else {
            res / scale
        }
    }

    pub fn coeffs_at(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        (self.c2.eval_complex(z), self.c1.eval_complex(z), self.c0.eval_complex(z))
    }

    /// Ascending coefficients of the cubic in `w` at `z`.
    pub fn cubic_at(&self, z: Complex64) -> [Complex64; 4] {
        let (c2, c1, c0) = self.coeffs_at(z);
        [-c0, c1, -c2, Complex64::new(1.0, 0.0)]
    }

    pub fn v_prime(&self) -> &Poly {
        &self.c2
    }

    /// Degree of the potential `V`.
    pub fn potential_degree(&self) -> usize {
        self.c2.degree() + 1
    }

    /// Fraction carried by the second sheet, read off the `z^(d-2)`
    /// coefficient of `c0`: `c0[d-2] = -a^2 V'[d-2] + a (x1 - x2) lead(V')`.
    pub fn x2(&self) -> f64 {
        let d = self.potential_degree();
        let diff = (self.c0.coeff(d - 2) + self.a * self.a * self.c2.coeff(d - 2)) / (self.a * self.c2.lead());
        0.5 * (1.0 - diff)
    }

    pub fn x1(&self) -> f64 {
        1.0 - self.x2()
    }

    /// Fraction for sheet `j` in {1, 2}.
    pub fn x(&self, j: usize) -> f64 {
        if j == 1 {
            self.x1()
        } else {
            self.x2()
        }
    }

    /// `(alpha, beta)` when the curve is the symmetric quartic.
    pub fn quartic_params(&self) -> Option<(f64, f64)> {
        (self.field == FieldKind::Quartic).then(|| (self.c1.coeff(0), -self.c0.coeff(1)))
    }

    /// `V_j'(z) = V'(z) ± a`, plus for `j = 1`.
    pub fn vj_prime(&self, j: usize, z: Complex64) -> Complex64 {
        let s = if j == 1 { self.a } else { -self.a };
        self.c2.eval_complex(z) + s
    }

    /// `V_j(x) = V(x) ± a x` with `V(0) = 0`.
    pub fn vj(&self, j: usize, x: f64) -> f64 {
        let s = if j == 1 { self.a } else { -self.a };
        self.c2.antiderivative().eval(x) + s * x
    }
}
