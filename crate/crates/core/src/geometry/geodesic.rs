use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use super::isometry::Isometry;
use super::point::{dist, BoundaryPoint, DiskPoint, TangentVec};
use crate::error::{Error, Result};

/// An oriented geodesic parameterized by arclength.
///
/// Parameter `s` corresponds to canonical arclength `s + origin_param`, where
/// canonical arclength 0 is the point of the geodesic closest to the disk center.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Geodesic {
    xi_minus: BoundaryPoint,
    xi_plus: BoundaryPoint,
    origin_param: f64,
    /// Maps the real diameter (oriented -1 -> 1, `tanh(u/2)` at arclength `u`) onto this geodesic.
    frame: Isometry,
    frame_inv: Isometry,
}

impl Geodesic {
    pub fn from_endpoints(xi_minus: BoundaryPoint, xi_plus: BoundaryPoint) -> Result<Self> {
        let sweep = (xi_plus.theta() - xi_minus.theta()).rem_euclid(TAU);
        if sweep < 1e-14 || TAU - sweep < 1e-14 {
            return Err(Error::DegenerateChord);
        }
        // half-width of the shorter arc between the endpoints, and its midpoint
        let (half, mid, quarter) = if sweep <= PI {
            (0.5 * sweep, xi_minus.theta() + 0.5 * sweep, FRAC_PI_2)
        } else {
            let h = 0.5 * (TAU - sweep);
            (h, xi_minus.theta() - h, -FRAC_PI_2)
        };
        let offset = (0.5 * (FRAC_PI_2 - half)).tan();
        let frame = Isometry::rotation(mid)
            .compose(&Isometry::translation_to(&DiskPoint::from_complex(
                Complex64::new(offset, 0.0),
            )?))
            .compose(&Isometry::rotation(quarter));
        Ok(Geodesic {
            xi_minus,
            xi_plus,
            origin_param: 0.0,
            frame,
            frame_inv: frame.inverse(),
        })
    }

    /// Same geodesic with parameter 0 moved to canonical arclength `origin_param`.
    pub fn with_origin(mut self, origin_param: f64) -> Self {
        self.origin_param = origin_param;
        self
    }

    /// The geodesic through `p` and `q`, oriented from `p` toward `q`.
    pub fn through(p: &DiskPoint, q: &DiskPoint) -> Result<Self> {
        let w = super::point::translate_to_origin(p.z(), q.z());
        if w.norm() == 0.0 || dist(p, q) == 0.0 {
            return Err(Error::DegenerateChord);
        }
        let dir = w / w.norm();
        let t = Isometry::translation_to(p);
        Self::from_endpoints(
            BoundaryPoint::from_complex(t.apply_complex(-dir)),
            BoundaryPoint::from_complex(t.apply_complex(dir)),
        )
    }

    pub fn xi_minus(&self) -> BoundaryPoint {
        self.xi_minus
    }

    pub fn xi_plus(&self) -> BoundaryPoint {
        self.xi_plus
    }

    pub fn origin_param(&self) -> f64 {
        self.origin_param
    }

    /// Hyperbolic distance from the disk center to the geodesic.
    pub fn distance_from_center(&self) -> f64 {
        self.frame.apply_complex(Complex64::new(0.0, 0.0)).norm().atanh() * 2.0
    }

    pub fn point_at(&self, s: f64) -> Result<DiskPoint> {
        let x = (0.5 * (s + self.origin_param)).tanh();
        DiskPoint::from_complex(self.frame.apply_complex(Complex64::new(x, 0.0)))
    }

    /// Unit tangent vector in the direction of the orientation.
    pub fn unit_tangent_at(&self, s: f64) -> Result<TangentVec> {
        let x = (0.5 * (s + self.origin_param)).tanh();
        let z = Complex64::new(x, 0.0);
        let base = DiskPoint::from_complex(self.frame.apply_complex(z))?;
        let v = self.frame.derivative(z) * (0.5 * (1.0 - x * x));
        Ok(TangentVec::new(base, v))
    }

    /// Arclength parameter of the orthogonal projection of `p`.
    pub fn project_param(&self, p: &DiskPoint) -> f64 {
        let q = self.frame_inv.apply_complex(p.z());
        let one = Complex64::new(1.0, 0.0);
        // Klein-model foot on the real diameter, written without cancellation
        ((one + q).norm() / (one - q).norm()).ln() - self.origin_param
    }

    /// Foot of the orthogonal projection of `p` and its parameter.
    pub fn project(&self, p: &DiskPoint) -> Result<(DiskPoint, f64)> {
        let s = self.project_param(p);
        Ok((self.point_at(s)?, s))
    }

    /// The map Σ: unit tangent of the geodesic at the foot of `p`.
    pub fn sigma_project(&self, p: &DiskPoint) -> Result<TangentVec> {
        self.unit_tangent_at(self.project_param(p))
    }

    /// Image under an isometry; arclength origin returns to the canonical convention.
    pub fn transformed(&self, g: &Isometry) -> Result<Geodesic> {
        Geodesic::from_endpoints(g.apply_boundary(&self.xi_minus), g.apply_boundary(&self.xi_plus))
    }

    /// Distance from `p` to the segment `s_min..=s_max` of the geodesic.
    pub fn distance_to_segment(&self, p: &DiskPoint, s_min: f64, s_max: f64) -> Result<f64> {
        let s = self.project_param(p).clamp(s_min, s_max);
        Ok(dist(p, &self.point_at(s)?))
    }

    /// Largest `|s|` whose point stays within hyperbolic radius `horizon` of the center.
    pub fn max_param_within(&self, horizon: f64) -> f64 {
        let h = self.distance_from_center();
        if h >= horizon {
            return f64::NEG_INFINITY;
        }
        // cosh d = cosh h cosh u on a geodesic at distance h from the center
        (horizon.cosh() / h.cosh()).acosh()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> DiskPoint {
        DiskPoint::new(x, y).unwrap()
    }

    #[test]
    fn diameter_through_real_points() {
        let g = Geodesic::through(&pt(-0.3, 0.0), &pt(0.5, 0.0)).unwrap();
        assert!((g.xi_minus().theta() - PI).abs() < 1e-12);
        assert!(g.xi_plus().theta() < 1e-12 || (g.xi_plus().theta() - TAU).abs() < 1e-12);
        assert!(g.point_at(0.0).unwrap().z().norm() < 1e-15);
    }

    #[test]
    fn vertical_diameter() {
        let g = Geodesic::through(&DiskPoint::ORIGIN, &pt(0.0, 0.3)).unwrap();
        assert!((g.xi_plus().theta() - FRAC_PI_2).abs() < 1e-12);
        assert!((g.xi_minus().theta() - 3.0 * FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn degenerate_chord() {
        assert_eq!(
            Geodesic::through(&pt(0.1, 0.1), &pt(0.1, 0.1)),
            Err(Error::DegenerateChord)
        );
    }

    #[test]
    fn generic_geodesic_contains_both_points_in_order() {
        let p = pt(0.6, 0.2);
        let q = pt(-0.1, 0.7);
        let g = Geodesic::through(&p, &q).unwrap();
        let (fp, sp) = g.project(&p).unwrap();
        let (fq, sq) = g.project(&q).unwrap();
        assert!(dist(&fp, &p) < 1e-10 && dist(&fq, &q) < 1e-10);
        assert!(sq > sp);
        assert!((sq - sp - dist(&p, &q)).abs() < 1e-10);
    }

    #[test]
    fn long_arc_orientation() {
        // endpoints whose counter-clockwise sweep exceeds pi
        let g = Geodesic::from_endpoints(BoundaryPoint::new(0.2), BoundaryPoint::new(5.0)).unwrap();
        let a = g.point_at(-20.0).unwrap();
        let b = g.point_at(20.0).unwrap();
        assert!(BoundaryPoint::from_complex(a.z()).angle_to(&g.xi_minus()) < 1e-6);
        assert!(BoundaryPoint::from_complex(b.z()).angle_to(&g.xi_plus()) < 1e-6);
    }

    #[test]
    fn projection_onto_real_diameter() {
        let g = Geodesic::through(&pt(-0.5, 0.0), &pt(0.5, 0.0)).unwrap().with_origin(0.25);
        let (foot, s) = g.project(&pt(0.0, 0.3)).unwrap();
        assert!(foot.z().norm() < 1e-15);
        assert!((s + 0.25).abs() < 1e-15);
        let t = g.sigma_project(&pt(0.0, 0.3)).unwrap();
        assert!((t.norm() - 1.0).abs() < 1e-14 && t.v.re > 0.0);
    }

    #[test]
    fn unit_tangent_has_unit_norm() {
        let g = Geodesic::from_endpoints(BoundaryPoint::new(1.0), BoundaryPoint::new(2.5)).unwrap();
        for s in [-4.0, -1.0, 0.0, 0.3, 6.0] {
            assert!((g.unit_tangent_at(s).unwrap().norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn max_param_within_horizon() {
        let g = Geodesic::from_endpoints(BoundaryPoint::new(1.0), BoundaryPoint::new(2.5)).unwrap();
        let u = g.max_param_within(10.0);
        assert!((g.point_at(u).unwrap().radius() - 10.0).abs() < 1e-6);
    }
}
