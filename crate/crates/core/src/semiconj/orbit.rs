use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{dist, BoundaryPoint, DiskPoint, Geodesic, Isometry, SampledCurve, TangentVec};

/// Far endpoints closer than this to the orbit midpoint give no usable direction.
pub const MIN_ASYMPTOTIC_DISTANCE: f64 = 5.0;

/// Finite-horizon estimate of the geodesic an orbit shadows.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticGeodesic {
    pub geodesic: Geodesic,
    /// Largest endpoint-angle change when the horizon is halved.
    pub estimator_delta: f64,
}

/// Boundary point hit by the ray from `m` through `p`.
fn ray_end(m: &DiskPoint, p: &DiskPoint) -> Result<BoundaryPoint> {
    let to_m = Isometry::translation_to(m);
    let w = to_m.inverse().apply(p)?.z();
    if w.norm() == 0.0 {
        return Err(Error::DegenerateChord);
    }
    Ok(to_m.apply_boundary(&BoundaryPoint::from_complex(w)))
}

fn ends(c: &SampledCurve, half: f64) -> Result<(DiskPoint, DiskPoint, DiskPoint)> {
    let tm = 0.5 * (c.start_time() + c.end_time());
    Ok((
        c.point_at_time(tm)?,
        c.point_at_time(tm - half)?,
        c.point_at_time(tm + half)?,
    ))
}

/// The geodesic from the past boundary direction to the future one, both read off as
/// rays from the orbit midpoint through the far endpoints.
pub fn asymptotic_geodesic(orbit: &SampledCurve) -> Result<AsymptoticGeodesic> {
    let half = 0.5 * (orbit.end_time() - orbit.start_time());
    let (m, past, future) = ends(orbit, half)?;
    let reach = dist(&m, &past).min(dist(&m, &future));
    if !(reach >= MIN_ASYMPTOTIC_DISTANCE) {
        return Err(Error::NoAsymptoticDirection { distance: reach });
    }
    let (minus, plus) = (ray_end(&m, &past)?, ray_end(&m, &future)?);
    let (m2, past2, future2) = ends(orbit, 0.5 * half)?;
    let estimator_delta = ray_end(&m2, &past2)?
        .angle_to(&minus)
        .max(ray_end(&m2, &future2)?.angle_to(&plus));
    Ok(AsymptoticGeodesic {
        geodesic: Geodesic::from_endpoints(minus, plus)?,
        estimator_delta,
    })
}

/// `D*` estimate with the spread of `D(z, T)/T` over the second half of the horizon.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DStar {
    pub estimate: f64,
    pub halfwidth: f64,
    /// `halfwidth <= tolerance`; a short horizon is flagged, not an error.
    pub within_tolerance: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Monotonicity {
    /// Smallest `σ̄(φ_β z) − σ̄(z)` over the grid and start times.
    pub min_increment: f64,
    /// The same for raw `σ`.
    pub raw_min_increment: f64,
}

/// Samples of `a(z, t)` and `σ̄` on a uniform grid, `z` the orbit start.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CocycleTrace {
    pub alpha: f64,
    pub times: Vec<f64>,
    pub a_values: Vec<f64>,
    pub sigma_bar_params: Vec<f64>,
}

/// Which start times an `α` margin is measured over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StartSet {
    Nodes,
    /// Midpoints between nodes, held out from the selection.
    Midpoints,
}

/// An orbit together with its shadow geodesic and the arclength positions `s` of the
/// projections of its nodes.
///
/// Between nodes, `s` is interpolated linearly; every integral below is the exact
/// integral of that interpolant.
#[derive(Clone, Debug)]
pub struct OrbitShadow {
    curve: SampledCurve,
    geodesic: Geodesic,
    estimator_delta: f64,
    s: Vec<f64>,
    /// `∫_{t_0}^{t_k} s`.
    prefix: Vec<f64>,
}

impl OrbitShadow {
    pub fn new(curve: SampledCurve) -> Result<Self> {
        let est = asymptotic_geodesic(&curve)?;
        let mut out = Self::with_geodesic(curve, est.geodesic);
        out.estimator_delta = est.estimator_delta;
        Ok(out)
    }

    /// Uses a given shadow geodesic instead of estimating one.
    pub fn with_geodesic(curve: SampledCurve, geodesic: Geodesic) -> Self {
        let s: Vec<f64> = curve.points().iter().map(|p| geodesic.project_param(p)).collect();
        let t = curve.times();
        let mut prefix = vec![0.0; s.len()];
        for k in 1..s.len() {
            prefix[k] = prefix[k - 1] + 0.5 * (t[k] - t[k - 1]) * (s[k] + s[k - 1]);
        }
        OrbitShadow {
            curve,
            geodesic,
            estimator_delta: 0.0,
            s,
            prefix,
        }
    }

    pub fn curve(&self) -> &SampledCurve {
        &self.curve
    }

    pub fn geodesic(&self) -> &Geodesic {
        &self.geodesic
    }

    pub fn estimator_delta(&self) -> f64 {
        self.estimator_delta
    }

    pub fn start_time(&self) -> f64 {
        self.curve.start_time()
    }

    pub fn end_time(&self) -> f64 {
        self.curve.end_time()
    }

    /// Segment index `k` with `t_k <= t <= t_{k+1}`, and `t` with rounding past the
    /// ends snapped back.
    fn locate(&self, t: f64) -> Result<(usize, f64)> {
        let times = self.curve.times();
        let (start, end) = (self.start_time(), self.end_time());
        let slack = 1e-12 * (1.0 + start.abs().max(end.abs()));
        if !(t >= start - slack && t <= end + slack) {
            return Err(Error::OutOfRange { t, start, end });
        }
        let t = t.clamp(start, end);
        Ok((times.partition_point(|&x| x <= t).clamp(1, times.len() - 1) - 1, t))
    }

    /// Arclength position of `σ` at orbit time `t`.
    pub fn s(&self, t: f64) -> Result<f64> {
        let (k, t) = self.locate(t)?;
        let times = self.curve.times();
        let f = (t - times[k]) / (times[k + 1] - times[k]);
        Ok(self.s[k] + f * (self.s[k + 1] - self.s[k]))
    }

    /// `σ(φ_t z)`: the unit tangent of the shadow geodesic and its arclength position.
    pub fn sigma_of(&self, t: f64) -> Result<(TangentVec, f64)> {
        let s = self.s(t)?;
        Ok((self.geodesic.unit_tangent_at(s)?, s))
    }

    /// `a(φ_{t0} z, t) = s(t0 + t) − s(t0)`.
    pub fn cocycle_a(&self, t0: f64, t: f64) -> Result<f64> {
        Ok(self.s(t0 + t)? - self.s(t0)?)
    }

    fn antiderivative(&self, t: f64) -> Result<f64> {
        let (k, t) = self.locate(t)?;
        let tk = self.curve.times()[k];
        Ok(self.prefix[k] + 0.5 * (t - tk) * (self.s[k] + self.s(t)?))
    }

    /// `∫_a^b s(t) dt`.
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        Ok(self.antiderivative(b)? - self.antiderivative(a)?)
    }

    /// `σ̄_α(φ_t z) = s(t) + (1/α) ∫_0^α a(φ_t z, u) du`, as an arclength position.
    pub fn fuller_average(&self, alpha: f64, t: f64) -> Result<f64> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidArgument(format!("alpha {alpha} must be > 0")));
        }
        let s = self.s(t)?;
        Ok(s + (self.integral(t, t + alpha)? - alpha * s) / alpha)
    }

    /// `(1/α) ∫_0^β a(φ_{t0+u} z, α) du`, integrated piecewise over the breakpoints of
    /// both shifted interpolants; equals `σ̄(φ_β z) − σ̄(z)` for `z = φ_{t0}`.
    pub fn telescoping_rhs(&self, alpha: f64, t0: f64, beta: f64) -> Result<f64> {
        if !(alpha > 0.0 && beta >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "need alpha > 0 and beta >= 0, got {alpha}, {beta}"
            )));
        }
        let mut u: Vec<f64> = vec![0.0, beta];
        for &t in self.curve.times() {
            for x in [t - t0, t - t0 - alpha] {
                if x > 0.0 && x < beta {
                    u.push(x);
                }
            }
        }
        u.sort_by(f64::total_cmp);
        u.dedup();
        let g = |x: f64| self.cocycle_a(t0 + x, alpha);
        let mut sum = 0.0;
        let mut prev = g(u[0])?;
        for w in u.windows(2) {
            let next = g(w[1])?;
            sum += 0.5 * (w[1] - w[0]) * (prev + next);
            prev = next;
        }
        Ok(sum / alpha)
    }

    /// Node times usable as start points for a look-ahead of `span`.
    fn starts(&self, span: f64, set: StartSet) -> Vec<f64> {
        let t = self.curve.times();
        let last = self.end_time() - span;
        match set {
            StartSet::Nodes => t.iter().copied().filter(|&x| x <= last).collect(),
            StartSet::Midpoints => t
                .windows(2)
                .map(|w| 0.5 * (w[0] + w[1]))
                .filter(|&x| x <= last)
                .collect(),
        }
    }

    /// Smallest `a(φ_t z, α)` over the start set; `+∞` when no start fits.
    pub fn min_a(&self, alpha: f64, set: StartSet) -> f64 {
        self.starts(alpha, set)
            .iter()
            .map(|&t| self.cocycle_a(t, alpha).unwrap_or(f64::NAN))
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest increment of `σ̄` and of raw `σ` over `β` in the grid and node start times.
    pub fn monotonicity_check(&self, alpha: f64, beta_grid: &[f64]) -> Result<Monotonicity> {
        if beta_grid.iter().any(|&b| !(b > 0.0)) {
            return Err(Error::InvalidArgument("beta grid must be positive".into()));
        }
        let rows: Vec<(f64, f64)> = beta_grid
            .par_iter()
            .map(|&beta| {
                let mut smooth = f64::INFINITY;
                for t in self.starts(beta + alpha, StartSet::Nodes) {
                    smooth = smooth.min(self.fuller_average(alpha, t + beta)? - self.fuller_average(alpha, t)?);
                }
                let mut raw = f64::INFINITY;
                for t in self.starts(beta, StartSet::Nodes) {
                    raw = raw.min(self.cocycle_a(t, beta)?);
                }
                Ok((smooth, raw))
            })
            .collect::<Result<_>>()?;
        let (min_increment, raw_min_increment) = rows
            .into_iter()
            .fold((f64::INFINITY, f64::INFINITY), |(a, b), (x, y)| (a.min(x), b.min(y)));
        Ok(Monotonicity {
            min_increment,
            raw_min_increment,
        })
    }

    /// `D(φ_{t0} z, t) = d(p(φ_{t0+t} z), p(φ_{t0} z))`.
    pub fn displacement(&self, t0: f64, t: f64) -> Result<f64> {
        Ok(dist(&self.curve.point_at_time(t0 + t)?, &self.curve.point_at_time(t0)?))
    }

    /// Largest `D(z, t+u) − D(z, t) − D(φ_t z, u)` over the triples `(t0, t, u)`.
    pub fn subadditivity_residual(&self, triples: &[(f64, f64, f64)]) -> Result<f64> {
        let mut worst = f64::NEG_INFINITY;
        for &(t0, t, u) in triples {
            let r = self.displacement(t0, t + u)? - self.displacement(t0, t)? - self.displacement(t0 + t, u)?;
            worst = worst.max(r);
        }
        Ok(worst)
    }

    /// Largest `|a(z, t+u) − a(z, t) − a(φ_t z, u)|` over the triples `(t0, t, u)`.
    pub fn additivity_residual(&self, triples: &[(f64, f64, f64)]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for &(t0, t, u) in triples {
            let r = self.cocycle_a(t0, t + u)? - self.cocycle_a(t0, t)? - self.cocycle_a(t0 + t, u)?;
            worst = worst.max(r.abs());
        }
        Ok(worst)
    }

    /// `D(z, T)/T` from the orbit start over the whole horizon.
    pub fn cesaro_dstar(&self, tolerance: f64) -> Result<DStar> {
        let (t0, span) = (self.start_time(), self.end_time() - self.start_time());
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &t in self.curve.times() {
            let big_t = t - t0;
            if big_t >= 0.5 * span {
                let r = self.displacement(t0, big_t)? / big_t;
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        let halfwidth = 0.5 * (hi - lo);
        Ok(DStar {
            estimate: self.displacement(t0, span)? / span,
            halfwidth,
            within_tolerance: halfwidth <= tolerance,
        })
    }

    pub fn cocycle_trace(&self, alpha: f64, spacing: f64) -> Result<CocycleTrace> {
        if !(spacing > 0.0) {
            return Err(Error::InvalidArgument(format!("spacing {spacing} must be > 0")));
        }
        let t0 = self.start_time();
        let count = ((self.end_time() - alpha - t0) / spacing + 1e-9).floor();
        if count < 0.0 {
            return Err(Error::InvalidArgument(format!("alpha {alpha} exceeds the horizon")));
        }
        let times: Vec<f64> = (0..=count as usize).map(|j| t0 + j as f64 * spacing).collect();
        let a_values = times
            .iter()
            .map(|&t| self.cocycle_a(t0, t - t0))
            .collect::<Result<_>>()?;
        let sigma_bar_params = times
            .iter()
            .map(|&t| self.fuller_average(alpha, t))
            .collect::<Result<_>>()?;
        Ok(CocycleTrace {
            alpha,
            times,
            a_values,
            sigma_bar_params,
        })
    }
}
