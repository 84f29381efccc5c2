use num_complex::Complex64;

use super::point::{BoundaryPoint, DiskPoint, TangentVec};
use crate::error::{Error, Result};

/// Determinant deviation above which a matrix is rejected as non-invertible.
const DET_TOLERANCE: f64 = 1e-6;
/// Above this `|a|^2` the computed determinant is dominated by rounding and
/// renormalization would inject error instead of removing it.
const RENORMALIZE_LIMIT: f64 = 1e4;

/// Orientation-preserving isometry `z -> (a z + b) / (conj(b) z + conj(a))`
/// with `|a|^2 - |b|^2 = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Isometry {
    a: Complex64,
    b: Complex64,
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        a: Complex64::new(1.0, 0.0),
        b: Complex64::new(0.0, 0.0),
    };

    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let det = a.norm_sqr() - b.norm_sqr();
        if !det.is_finite() || (det - 1.0).abs() > DET_TOLERANCE {
            return Err(Error::NonInvertible {
                deviation: (det - 1.0).abs(),
            });
        }
        let s = det.sqrt();
        Ok(Isometry { a: a / s, b: b / s })
    }

    /// Rotation about the origin by `theta`.
    pub fn rotation(theta: f64) -> Self {
        Isometry {
            a: Complex64::from_polar(1.0, 0.5 * theta),
            b: Complex64::new(0.0, 0.0),
        }
    }

    /// The hyperbolic translation taking the origin to `p` along the diameter through `p`.
    pub fn translation_to(p: &DiskPoint) -> Self {
        let s = (1.0 - p.z().norm_sqr()).sqrt();
        Isometry {
            a: Complex64::new(1.0 / s, 0.0),
            b: p.z() / s,
        }
    }

    /// Translation by hyperbolic length `length` along the diameter in direction `theta`.
    pub fn translation_along(theta: f64, length: f64) -> Self {
        let h = 0.5 * length;
        Isometry {
            a: Complex64::new(h.cosh(), 0.0),
            b: Complex64::from_polar(h.sinh(), theta),
        }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn determinant(&self) -> f64 {
        self.a.norm_sqr() - self.b.norm_sqr()
    }

    /// Trace of the SU(1,1) matrix; `|trace| > 2` means hyperbolic.
    pub fn trace(&self) -> f64 {
        2.0 * self.a.re
    }

    /// Hyperbolic distance the isometry moves the origin.
    pub fn displacement_of_origin(&self) -> f64 {
        2.0 * self.b.norm().asinh()
    }

    #[inline]
    pub(crate) fn apply_complex(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.b.conj() * z + self.a.conj())
    }

    pub fn apply(&self, p: &DiskPoint) -> Result<DiskPoint> {
        DiskPoint::from_complex(self.apply_complex(p.z()))
    }

    pub fn apply_boundary(&self, xi: &BoundaryPoint) -> BoundaryPoint {
        BoundaryPoint::from_complex(self.apply_complex(xi.z()))
    }

    /// Complex derivative of the Möbius map at `z`.
    #[inline]
    pub(crate) fn derivative(&self, z: Complex64) -> Complex64 {
        let den = self.b.conj() * z + self.a.conj();
        Complex64::new(self.determinant(), 0.0) / (den * den)
    }

    /// Push a tangent vector forward.
    pub fn differential(&self, w: &TangentVec) -> Result<TangentVec> {
        let base = self.apply(&w.base)?;
        Ok(TangentVec::new(base, w.v * self.derivative(w.base.z())))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let a = self.a * other.a + self.b * other.b.conj();
        let b = self.a * other.b + self.b * other.a.conj();
        let mut g = Isometry { a, b };
        if a.norm_sqr() < RENORMALIZE_LIMIT {
            let det = g.determinant();
            if det > 0.0 {
                let s = det.sqrt();
                g.a /= s;
                g.b /= s;
            }
        }
        g
    }

    pub fn inverse(&self) -> Isometry {
        Isometry {
            a: self.a.conj(),
            b: -self.b,
        }
    }

    /// Distance to the identity in PSU(1,1), i.e. up to the sign of the matrix.
    pub fn identity_residual(&self) -> f64 {
        let one = Complex64::new(1.0, 0.0);
        let plus = (self.a - one).norm().max(self.b.norm());
        let minus = (self.a + one).norm().max(self.b.norm());
        plus.min(minus)
    }
}
