use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points must satisfy `|z| < 1 - BOUNDARY_MARGIN`.
pub const BOUNDARY_MARGIN: f64 = 1e-12;

/// A point of the Poincaré disk.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint(Complex64::new(0.0, 0.0));

    pub fn new(x: f64, y: f64) -> Result<Self> {
        Self::from_complex(Complex64::new(x, y))
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        let radius = z.norm();
        if !radius.is_finite() || radius >= 1.0 - BOUNDARY_MARGIN {
            return Err(Error::BoundaryOverflow { radius });
        }
        Ok(DiskPoint(z))
    }

    /// Point at hyperbolic distance `r` from the origin in direction `theta`.
    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        Self::from_complex(Complex64::from_polar((0.5 * r).tanh(), theta))
    }

    #[inline]
    pub fn z(&self) -> Complex64 {
        self.0
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.0.re
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.0.im
    }

    /// The conformal factor `2 / (1 - |z|^2)`.
    #[inline]
    pub fn conformal_factor(&self) -> f64 {
        2.0 / (1.0 - self.0.norm_sqr())
    }

    /// Hyperbolic distance to the origin.
    pub fn radius(&self) -> f64 {
        2.0 * self.0.norm().atanh()
    }
}

impl fmt::Debug for DiskPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiskPoint({}, {})", self.0.re, self.0.im)
    }
}

impl TryFrom<[f64; 2]> for DiskPoint {
    type Error = Error;
    fn try_from(v: [f64; 2]) -> Result<Self> {
        DiskPoint::new(v[0], v[1])
    }
}

impl From<DiskPoint> for [f64; 2] {
    fn from(p: DiskPoint) -> Self {
        [p.x(), p.y()]
    }
}

/// A point `e^{i theta}` of the circle at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    theta: f64,
}

impl BoundaryPoint {
    pub fn new(theta: f64) -> Self {
        let mut t = theta.rem_euclid(TAU);
        if t >= TAU {
            t = 0.0;
        }
        BoundaryPoint { theta: t }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z.arg())
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn z(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }

    /// Unsigned angular separation in `[0, pi]`.
    pub fn angle_to(&self, other: &BoundaryPoint) -> f64 {
        let d = (self.theta - other.theta).rem_euclid(TAU);
        d.min(TAU - d)
    }
}

/// A tangent vector with Euclidean components `v` based at a disk point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentVec {
    pub base: DiskPoint,
    pub v: Complex64,
}

impl TangentVec {
    pub fn new(base: DiskPoint, v: Complex64) -> Self {
        TangentVec { base, v }
    }

    pub fn zero(base: DiskPoint) -> Self {
        TangentVec {
            base,
            v: Complex64::new(0.0, 0.0),
        }
    }

    /// Hyperbolic norm `2 |v| / (1 - |base|^2)`.
    pub fn norm(&self) -> f64 {
        self.base.conformal_factor() * self.v.norm()
    }

    pub fn scale(&self, k: f64) -> TangentVec {
        TangentVec::new(self.base, self.v * k)
    }

    /// Sum of two vectors based at the same point.
    pub fn add(&self, other: &TangentVec) -> TangentVec {
        debug_assert!(self.base == other.base);
        TangentVec::new(self.base, self.v + other.v)
    }

    pub fn sub(&self, other: &TangentVec) -> TangentVec {
        debug_assert!(self.base == other.base);
        TangentVec::new(self.base, self.v - other.v)
    }

    /// Metric inner product with a vector at the same base.
    pub fn dot(&self, other: &TangentVec) -> f64 {
        let lam = self.base.conformal_factor();
        lam * lam * (self.v.re * other.v.re + self.v.im * other.v.im)
    }

    pub fn unit(&self) -> Option<TangentVec> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(1.0 / n))
    }

    pub fn is_zero(&self) -> bool {
        self.v.re == 0.0 && self.v.im == 0.0
    }
}

/// Hyperbolic distance (curvature -1).
pub fn dist(p: &DiskPoint, q: &DiskPoint) -> f64 {
    let (p, q) = (p.z(), q.z());
    let num = (p - q).norm();
    if num == 0.0 {
        return 0.0;
    }
    let den = (Complex64::new(1.0, 0.0) - p.conj() * q).norm();
    let r = num / den;
    if r < 0.5 {
        2.0 * r.atanh()
    } else {
        // 1 - r^2 = (1-|p|^2)(1-|q|^2)/|1 - conj(p) q|^2, free of cancellation
        let one_minus_r2 = (1.0 - p.norm_sqr()) * (1.0 - q.norm_sqr()) / (den * den);
        2.0 * r.ln_1p() - one_minus_r2.ln()
    }
}

/// `z -> (z + p) / (conj(p) z + 1)`, the translation taking 0 to `p`.
#[inline]
pub(crate) fn translate_from_origin(p: Complex64, z: Complex64) -> Complex64 {
    (z + p) / (p.conj() * z + 1.0)
}

/// Inverse of [`translate_from_origin`].
#[inline]
pub(crate) fn translate_to_origin(p: Complex64, z: Complex64) -> Complex64 {
    (z - p) / (1.0 - p.conj() * z)
}

/// The point reached at time `s` along the geodesic with initial velocity `w`.
///
/// A zero vector returns its base for every `s`.
pub fn exp_map(w: &TangentVec, s: f64) -> Result<DiskPoint> {
    let speed = w.norm();
    if speed == 0.0 || s == 0.0 {
        return Ok(w.base);
    }
    let dir = w.v / w.v.norm();
    let at_origin = dir * (0.5 * s * speed).tanh();
    DiskPoint::from_complex(translate_from_origin(w.base.z(), at_origin))
}

/// Inverse of [`exp_map`] at time 1: the initial velocity of the geodesic from `p` to `q`.
pub fn log_map(p: &DiskPoint, q: &DiskPoint) -> TangentVec {
    let w = translate_to_origin(p.z(), q.z());
    let r = w.norm();
    if r == 0.0 {
        return TangentVec::zero(*p);
    }
    let d = dist(p, q);
    // at the origin the metric is 4|dz|^2; translation scales by (1 - |p|^2)
    let v0 = w / r * (0.5 * d);
    TangentVec::new(*p, v0 * (1.0 - p.z().norm_sqr()))
}

/// Geodesic midpoint-style interpolation: the point a fraction `f` of the way from `p` to `q`.
pub fn geodesic_interpolate(p: &DiskPoint, q: &DiskPoint, f: f64) -> Result<DiskPoint> {
    if f == 0.0 {
        return Ok(*p);
    }
    if f == 1.0 {
        return Ok(*q);
    }
    exp_map(&log_map(p, q), f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> DiskPoint {
        DiskPoint::new(x, y).unwrap()
    }

    #[test]
    fn radial_distance_closed_form() {
        assert!((dist(&DiskPoint::ORIGIN, &pt(0.5, 0.0)) - 3f64.ln()).abs() < 1e-14);
        assert!((dist(&pt(-0.5, 0.0), &pt(0.5, 0.0)) - 9f64.ln()).abs() < 1e-14);
        assert_eq!(dist(&pt(0.3, -0.2), &pt(0.3, -0.2)), 0.0);
    }

    #[test]
    fn distance_branches_agree_with_arcosh_form() {
        let pairs = [
            (pt(0.1, 0.2), pt(0.15, 0.22)),
            (pt(0.9, 0.1), pt(-0.3, 0.5)),
            (pt(0.0, 0.99), pt(0.2, -0.97)),
        ];
        for (p, q) in pairs {
            let a = 1.0
                + 2.0 * (p.z() - q.z()).norm_sqr()
                    / ((1.0 - p.z().norm_sqr()) * (1.0 - q.z().norm_sqr()));
            assert!((dist(&p, &q) - a.acosh()).abs() < 1e-10);
        }
    }

    #[test]
    fn construction_rejects_boundary() {
        assert!(DiskPoint::new(1.0, 0.0).is_err());
        assert!(DiskPoint::new(0.0, 1.0 - 1e-13).is_err());
        assert!(DiskPoint::new(0.0, 1.0 - 1e-11).is_ok());
        assert!(matches!(
            DiskPoint::new(f64::NAN, 0.0),
            Err(Error::BoundaryOverflow { .. })
        ));
    }

    #[test]
    fn exp_from_origin() {
        let w = TangentVec::new(DiskPoint::ORIGIN, Complex64::new(0.5, 0.0));
        assert!((w.norm() - 1.0).abs() < 1e-15);
        let q = exp_map(&w, 1.0).unwrap();
        assert!((q.x() - 0.5f64.tanh()).abs() < 1e-15);
        assert_eq!(exp_map(&w, 0.0).unwrap(), DiskPoint::ORIGIN);
        let zero = TangentVec::zero(pt(0.2, 0.1));
        assert_eq!(exp_map(&zero, 3.0).unwrap(), pt(0.2, 0.1));
    }

    #[test]
    fn exp_overflows_explicitly() {
        let w = TangentVec::new(DiskPoint::ORIGIN, Complex64::new(0.5, 0.0));
        assert!(matches!(
            exp_map(&w, 60.0),
            Err(Error::BoundaryOverflow { .. })
        ));
    }

    #[test]
    fn log_inverts_exp_example() {
        let q = pt(0.5f64.tanh(), 0.0);
        let v = log_map(&DiskPoint::ORIGIN, &q);
        assert!((v.norm() - 1.0).abs() < 1e-12);
        assert!(v.v.im.abs() < 1e-15 && v.v.re > 0.0);
        assert!(log_map(&q, &q).is_zero());
    }

    #[test]
    fn boundary_point_reduction() {
        let b = BoundaryPoint::new(-0.5);
        assert!((b.theta() - (TAU - 0.5)).abs() < 1e-15);
        assert!((BoundaryPoint::new(0.1).angle_to(&BoundaryPoint::new(TAU - 0.1)) - 0.2).abs() < 1e-12);
    }
}
