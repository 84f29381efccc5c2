//! Finite-horizon semiconjugacy from minimizing orbits to the geodesic flow: shadow
//! geodesics, the projection cocycle, Fuller averaging and the displacement cocycle.

mod orbit;

use rayon::prelude::*;
use serde::Serialize;

pub use orbit::{
    asymptotic_geodesic, AsymptoticGeodesic, CocycleTrace, DStar, Monotonicity, OrbitShadow,
    StartSet, MIN_ASYMPTOTIC_DISTANCE,
};

use crate::error::{Error, Result};
use crate::geometry::{dist, SampledCurve};
use crate::lagrangian::{integrate_el, ELState, MechanicalLagrangian, StepControl};
use crate::minimizer::{verify_subsegment_minimality, SolverSettings};
use crate::qg::{qg_check, PropConstants};

pub const ALPHA_GRID_STEP: f64 = 0.25;
pub const DEFAULT_ALPHA_BUDGET: usize = 64;

/// Membership tests for the minimizing set at the chosen `K`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QkFlags {
    /// Subsegment certificate at tolerance plus the `(λ, ε)` check; not a proof.
    pub minimal: bool,
    /// Every node-aligned window of length `>= N0` has `ρ >= k''`.
    pub window_speed: bool,
    /// Number of such windows; zero makes `window_speed` vacuous.
    pub windows_checked: usize,
    /// Every sampled speed is `<= K''`.
    pub speed_bound: bool,
}

impl QkFlags {
    pub fn all(&self) -> bool {
        self.minimal && self.window_speed && self.speed_bound
    }
}

/// A lifted orbit with optional membership flags.
#[derive(Clone, Debug)]
pub struct OrbitRecord {
    pub trajectory: SampledCurve,
    pub qk_flags: Option<QkFlags>,
}

impl OrbitRecord {
    pub fn new(trajectory: SampledCurve) -> Self {
        OrbitRecord {
            trajectory,
            qk_flags: None,
        }
    }
}

/// The orbit through `start` over `[t0 − T, t0 + T]`, with velocities.
pub fn two_sided_orbit(
    l: &MechanicalLagrangian,
    start: &ELState,
    t_max: f64,
    control: &StepControl,
) -> Result<SampledCurve> {
    if !(t_max > 0.0) {
        return Err(Error::InvalidArgument(format!("t_max {t_max} must be > 0")));
    }
    let back = integrate_el(l, start, -t_max, control)?;
    let fwd = integrate_el(l, start, t_max, control)?;
    let mut states = back.states;
    states.pop();
    states.extend(fwd.states);
    let times = states.iter().map(|s| s.time).collect();
    let points = states.iter().map(|s| s.position).collect();
    let vel = states.iter().map(|s| s.velocity).collect();
    SampledCurve::new(times, points)?.with_velocities(vel)
}

pub fn qk_flags(
    l: &MechanicalLagrangian,
    orbit: &SampledCurve,
    constants: &PropConstants,
    samples: usize,
    solver: SolverSettings,
) -> Result<QkFlags> {
    let certified = verify_subsegment_minimality(l, orbit, samples, solver)?.certified;
    let qg = qg_check(orbit, constants.lambda, constants.epsilon, 1)?.ok;
    let (t, p) = (orbit.times(), orbit.points());
    let n0 = constants.n0 as f64;
    let mut windows = 0;
    let mut slow = false;
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            let span = t[j] - t[i];
            if span >= n0 - 1e-9 {
                windows += 1;
                slow |= dist(&p[i], &p[j]) / span < constants.k_window_min;
            }
        }
    }
    let top = match orbit.velocities() {
        Some(v) => v.iter().map(|w| w.norm()).fold(0.0, f64::max),
        None => orbit.segment_speeds().into_iter().fold(0.0, f64::max),
    };
    Ok(QkFlags {
        minimal: certified && qg,
        window_speed: !slow,
        windows_checked: windows,
        speed_bound: top <= constants.k_speed_max,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AlphaChoice {
    pub alpha: f64,
    /// Smallest `a(·, α)` over the ensemble and node start times.
    pub margin: f64,
}

/// Smallest `a(φ_t z, α)` over an ensemble.
pub fn alpha_margin(orbits: &[OrbitShadow], alpha: f64, set: StartSet) -> f64 {
    orbits
        .par_iter()
        .map(|o| o.min_a(alpha, set))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

/// The first `α` on the grid `0.25, 0.5, ...` with `a(·, α) > 0` on every orbit and
/// node start time.
pub fn choose_alpha(orbits: &[OrbitShadow], budget: usize) -> Result<AlphaChoice> {
    if orbits.is_empty() {
        return Err(Error::InvalidArgument("empty orbit ensemble".into()));
    }
    let mut best = f64::NEG_INFINITY;
    for j in 1..=budget {
        let alpha = ALPHA_GRID_STEP * j as f64;
        let margin = alpha_margin(orbits, alpha, StartSet::Nodes);
        if margin.is_finite() && margin > 0.0 {
            return Ok(AlphaChoice { alpha, margin });
        }
        if margin.is_finite() {
            best = best.max(margin);
        }
    }
    Err(Error::NoUniformAlpha {
        budget,
        best_margin: best,
    })
}

/// Per-orbit summary written by the runner.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitReport {
    /// Boundary angles of the shadow geodesic, past then future.
    pub gamma_endpoints: [f64; 2],
    pub estimator_delta: f64,
    pub alpha: f64,
    pub min_sigma_bar_increment: f64,
    pub raw_min_increment: f64,
    pub additivity_residual: f64,
    pub subadditivity_residual: f64,
    pub d_star: DStar,
    pub qk_flags: Option<QkFlags>,
}

/// `(t0, t, u)` triples on a regular lattice of the horizon.
pub fn lattice_triples(orbit: &OrbitShadow, per_axis: usize) -> Vec<(f64, f64, f64)> {
    let (a, span) = (orbit.start_time(), orbit.end_time() - orbit.start_time());
    let h = span / (per_axis.max(1) as f64 * 3.0);
    let mut out = Vec::new();
    for i in 0..per_axis {
        for j in 1..=per_axis {
            for k in 1..=per_axis {
                out.push((a + i as f64 * h, j as f64 * h, k as f64 * h));
            }
        }
    }
    out
}

pub fn orbit_report(
    shadow: &OrbitShadow,
    alpha: f64,
    beta_grid: &[f64],
    dstar_tolerance: f64,
    qk_flags: Option<QkFlags>,
) -> Result<OrbitReport> {
    let mono = shadow.monotonicity_check(alpha, beta_grid)?;
    let triples = lattice_triples(shadow, 8);
    let g = shadow.geodesic();
    Ok(OrbitReport {
        gamma_endpoints: [g.xi_minus().theta(), g.xi_plus().theta()],
        estimator_delta: shadow.estimator_delta(),
        alpha,
        min_sigma_bar_increment: mono.min_increment,
        raw_min_increment: mono.raw_min_increment,
        additivity_residual: shadow.additivity_residual(&triples)?,
        subadditivity_residual: shadow.subadditivity_residual(&triples)?.max(0.0),
        d_star: shadow.cesaro_dstar(dstar_tolerance)?,
        qk_flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{DiskPoint, Geodesic};

    fn geodesic_orbit(speed: f64, half: f64, n: usize) -> (Geodesic, SampledCurve) {
        let g = Geodesic::through(&DiskPoint::new(0.1, -0.2).unwrap(), &DiskPoint::new(0.3, 0.1).unwrap())
            .unwrap();
        let c = SampledCurve::sample(-half, half, n, |t| g.point_at(speed * t)).unwrap();
        (g, c)
    }

    #[test]
    fn geodesic_orbit_recovers_its_geodesic() {
        let (g, c) = geodesic_orbit(1.0, 8.0, 161);
        let o = OrbitShadow::new(c).unwrap();
        assert!(o.geodesic().xi_minus().angle_to(&g.xi_minus()) < 1e-9);
        assert!(o.geodesic().xi_plus().angle_to(&g.xi_plus()) < 1e-9);
        let s0 = o.s(0.0).unwrap();
        for t in [-3.0, 0.7, 5.0] {
            assert!((o.s(t).unwrap() - s0 - t).abs() < 1e-8);
            assert!((o.cocycle_a(0.0, t).unwrap() - t).abs() < 1e-8);
        }
        assert_eq!(o.cocycle_a(2.0, 0.0).unwrap(), 0.0);
        let alpha = 0.5;
        assert!((o.fuller_average(alpha, 1.0).unwrap() - (s0 + 1.0 + alpha / 2.0)).abs() < 1e-8);
    }

    #[test]
    fn short_orbit_has_no_direction() {
        let (_, c) = geodesic_orbit(1.0, 3.0, 31);
        assert!(matches!(
            OrbitShadow::new(c),
            Err(Error::NoAsymptoticDirection { .. })
        ));
    }

    #[test]
    fn geodesic_ensemble_takes_first_alpha() {
        let o = OrbitShadow::new(geodesic_orbit(1.0, 8.0, 161).1).unwrap();
        let choice = choose_alpha(&[o], DEFAULT_ALPHA_BUDGET).unwrap();
        assert_eq!(choice.alpha, 0.25);
        assert!((choice.margin - 0.25).abs() < 1e-8);
    }
}
