use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use super::geodesic::Geodesic;
use super::isometry::Isometry;
use super::point::{dist, geodesic_interpolate, DiskPoint, TangentVec};
use crate::error::{Error, Result};

/// Default parameter spacing used when scanning a geodesic segment in
/// [`SampledCurve::hausdorff_to_geodesic`].
pub const HAUSDORFF_SCAN_SPACING: f64 = 0.01;

/// Slack used when deciding whether a time lies inside the sampled range.
const TIME_SLACK: f64 = 1e-12;

/// A discretized path `t -> gamma(t)` in the disk.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledCurve {
    times: Vec<f64>,
    points: Vec<DiskPoint>,
    velocities: Option<Vec<TangentVec>>,
}

impl SampledCurve {
    pub fn new(times: Vec<f64>, points: Vec<DiskPoint>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::InvalidCurve(format!(
                "need at least 2 samples, got {}",
                times.len()
            )));
        }
        if times.len() != points.len() {
            return Err(Error::InvalidCurve(format!(
                "{} times but {} points",
                times.len(),
                points.len()
            )));
        }
        if let Some(k) = times.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidCurve(format!(
                "times not strictly increasing at index {}",
                k + 1
            )));
        }
        Ok(SampledCurve {
            times,
            points,
            velocities: None,
        })
    }

    pub fn with_velocities(mut self, velocities: Vec<TangentVec>) -> Result<Self> {
        if velocities.len() != self.points.len() {
            return Err(Error::InvalidCurve("velocity count mismatch".into()));
        }
        if velocities.iter().zip(&self.points).any(|(v, p)| v.base != *p) {
            return Err(Error::InvalidCurve(
                "velocity not based at its sample point".into(),
            ));
        }
        self.velocities = Some(velocities);
        Ok(self)
    }

    /// Uniformly spaced samples of `f` on `[a, b]`.
    pub fn sample<F>(a: f64, b: f64, n: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<DiskPoint>,
    {
        if !(b > a) || n < 2 {
            return Err(Error::InvalidInterval { a, b });
        }
        let times = uniform_times(a, b, n);
        let points = times.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        Self::new(times, points)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn points(&self) -> &[DiskPoint] {
        &self.points
    }

    pub fn velocities(&self) -> Option<&[TangentVec]> {
        self.velocities.as_deref()
    }

    pub fn start_time(&self) -> f64 {
        self.times[0]
    }

    pub fn end_time(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    pub fn first(&self) -> DiskPoint {
        self.points[0]
    }

    pub fn last(&self) -> DiskPoint {
        self.points[self.points.len() - 1]
    }

    /// Index `k` with `times[k] <= t <= times[k + 1]`.
    fn bracket(&self, t: f64) -> Result<usize> {
        let (start, end) = (self.start_time(), self.end_time());
        let slack = TIME_SLACK * (1.0 + start.abs().max(end.abs()));
        if !(t >= start - slack && t <= end + slack) {
            return Err(Error::OutOfRange { t, start, end });
        }
        let k = self.times.partition_point(|&s| s <= t);
        Ok(k.saturating_sub(1).min(self.times.len() - 2))
    }

    /// Position at time `t`, geodesically interpolated between bracketing samples.
    pub fn point_at_time(&self, t: f64) -> Result<DiskPoint> {
        let k = self.bracket(t)?;
        let (t0, t1) = (self.times[k], self.times[k + 1]);
        let f = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
        geodesic_interpolate(&self.points[k], &self.points[k + 1], f)
    }

    /// Average displacement `d(gamma(a), gamma(b)) / (b - a)`.
    pub fn rho(&self, a: f64, b: f64) -> Result<f64> {
        if !(a < b) {
            return Err(Error::InvalidInterval { a, b });
        }
        Ok(dist(&self.point_at_time(a)?, &self.point_at_time(b)?) / (b - a))
    }

    /// Polyline length over `[a, b]`.
    pub fn curve_length(&self, a: f64, b: f64) -> Result<f64> {
        if !(a < b) {
            return Err(Error::InvalidInterval { a, b });
        }
        let mut prev = self.point_at_time(a)?;
        let mut total = 0.0;
        for (t, p) in self.times.iter().zip(&self.points) {
            if *t > a && *t < b {
                total += dist(&prev, p);
                prev = *p;
            }
        }
        Ok(total + dist(&prev, &self.point_at_time(b)?))
    }

    /// Total polyline length.
    pub fn length(&self) -> f64 {
        self.points.windows(2).map(|w| dist(&w[0], &w[1])).sum()
    }

    /// Node speeds `d(p_k, p_{k+1}) / (t_{k+1} - t_k)`.
    pub fn segment_speeds(&self) -> Vec<f64> {
        self.points
            .windows(2)
            .zip(self.times.windows(2))
            .map(|(p, t)| dist(&p[0], &p[1]) / (t[1] - t[0]))
            .collect()
    }

    /// The sub-curve on `[a, b]`, with interpolated endpoints.
    pub fn restrict(&self, a: f64, b: f64) -> Result<SampledCurve> {
        if !(a < b) {
            return Err(Error::InvalidInterval { a, b });
        }
        let eps = 1e-12 * (b - a);
        let mut times = vec![a];
        let mut points = vec![self.point_at_time(a)?];
        for (t, p) in self.times.iter().zip(&self.points) {
            if *t > a + eps && *t < b - eps {
                times.push(*t);
                points.push(*p);
            }
        }
        times.push(b);
        points.push(self.point_at_time(b)?);
        SampledCurve::new(times, points)
    }

    /// Same curve with every time shifted by `dt`.
    pub fn shifted(&self, dt: f64) -> SampledCurve {
        SampledCurve {
            times: self.times.iter().map(|t| t + dt).collect(),
            points: self.points.clone(),
            velocities: self.velocities.clone(),
        }
    }

    /// Image under an isometry, velocities pushed forward.
    pub fn transformed(&self, g: &Isometry) -> Result<SampledCurve> {
        let points = self
            .points
            .iter()
            .map(|p| g.apply(p))
            .collect::<Result<Vec<_>>>()?;
        let velocities = match &self.velocities {
            Some(vs) => Some(
                vs.iter()
                    .map(|v| g.differential(v))
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        Ok(SampledCurve {
            times: self.times.clone(),
            points,
            velocities,
        })
    }

    /// Hausdorff distance between the curve and the segment `[s_min, s_max]` of `g`.
    pub fn hausdorff_to_geodesic(&self, g: &Geodesic, s_min: f64, s_max: f64) -> Result<f64> {
        self.hausdorff_to_geodesic_with_spacing(g, s_min, s_max, HAUSDORFF_SCAN_SPACING)
    }

    /// Curve-to-segment side uses clamped projection; segment-to-curve side scans the
    /// segment at `spacing` against the curve's geodesic polyline.
    pub fn hausdorff_to_geodesic_with_spacing(
        &self,
        g: &Geodesic,
        s_min: f64,
        s_max: f64,
        spacing: f64,
    ) -> Result<f64> {
        if !(s_min < s_max) {
            return Err(Error::InvalidInterval { a: s_min, b: s_max });
        }
        let mut curve_side = 0.0f64;
        for p in &self.points {
            curve_side = curve_side.max(g.distance_to_segment(p, s_min, s_max)?);
        }
        let pieces = self.polyline_pieces()?;
        let m = ((s_max - s_min) / spacing).ceil().max(1.0) as usize;
        let mut segment_side = 0.0f64;
        for j in 0..=m {
            let y = g.point_at(s_min + (s_max - s_min) * j as f64 / m as f64)?;
            let mut best = f64::INFINITY;
            for piece in &pieces {
                best = best.min(piece.distance(&y)?);
            }
            segment_side = segment_side.max(best);
        }
        Ok(curve_side.max(segment_side))
    }

    fn polyline_pieces(&self) -> Result<Vec<Piece>> {
        self.points
            .windows(2)
            .map(|w| {
                if dist(&w[0], &w[1]) == 0.0 {
                    return Ok(Piece::Point(w[0]));
                }
                let g = Geodesic::through(&w[0], &w[1])?;
                let s0 = g.project_param(&w[0]);
                let s1 = g.project_param(&w[1]);
                Ok(Piece::Arc(g, s0.min(s1), s0.max(s1)))
            })
            .collect()
    }

    /// CSV with header `t,x,y` or `t,x,y,vx,vy`, 17 significant digits.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        match &self.velocities {
            Some(vs) => {
                out.push_str("t,x,y,vx,vy\n");
                for ((t, p), v) in self.times.iter().zip(&self.points).zip(vs) {
                    let _ = writeln!(
                        out,
                        "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                        t,
                        p.x(),
                        p.y(),
                        v.v.re,
                        v.v.im
                    );
                }
            }
            None => {
                out.push_str("t,x,y\n");
                for (t, p) in self.times.iter().zip(&self.points) {
                    let _ = writeln!(out, "{:.16e},{:.16e},{:.16e}", t, p.x(), p.y());
                }
            }
        }
        out
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty curve file".into()))?;
        let with_velocity = match header.trim() {
            "t,x,y" => false,
            "t,x,y,vx,vy" => true,
            other => return Err(Error::Parse(format!("unexpected curve header '{other}'"))),
        };
        let width = if with_velocity { 5 } else { 3 };
        let (mut times, mut points, mut vels) = (Vec::new(), Vec::new(), Vec::new());
        for (i, line) in lines.enumerate() {
            let fields = line
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", i + 2)))?;
            if fields.len() != width {
                return Err(Error::Parse(format!(
                    "line {}: expected {width} fields, got {}",
                    i + 2,
                    fields.len()
                )));
            }
            let p = DiskPoint::new(fields[1], fields[2])?;
            times.push(fields[0]);
            points.push(p);
            if with_velocity {
                vels.push(TangentVec::new(p, Complex64::new(fields[3], fields[4])));
            }
        }
        let curve = SampledCurve::new(times, points)?;
        if with_velocity {
            curve.with_velocities(vels)
        } else {
            Ok(curve)
        }
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        Self::from_csv_str(&std::fs::read_to_string(path)?)
    }
}

enum Piece {
    Point(DiskPoint),
    Arc(Geodesic, f64, f64),
}

impl Piece {
    fn distance(&self, y: &DiskPoint) -> Result<f64> {
        match self {
            Piece::Point(p) => Ok(dist(p, y)),
            Piece::Arc(g, s0, s1) => g.distance_to_segment(y, *s0, *s1),
        }
    }
}

pub(crate) fn uniform_times(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|k| if k == n - 1 { b } else { a + h * k as f64 })
        .collect()
}
