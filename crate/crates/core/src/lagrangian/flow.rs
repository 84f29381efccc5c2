use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ELState, MechanicalLagrangian};
use crate::error::{Error, Result};
use crate::geometry::{DiskPoint, SampledCurve, TangentVec};

/// Step-size control for [`integrate_el`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StepControl {
    /// Accepted local error per step (metric norm on position and velocity).
    pub tolerance: f64,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Record samples on this uniform grid instead of at every accepted step.
    pub output_spacing: Option<f64>,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            tolerance: 1e-12,
            initial_step: 0.01,
            min_step: 1e-12,
            max_step: 0.1,
            output_spacing: None,
        }
    }
}

/// Step statistics of one integration, serialized as the run summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunSummary {
    pub initial_position: [f64; 2],
    pub initial_velocity: [f64; 2],
    pub initial_time: f64,
    pub duration: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub min_step_used: f64,
    pub max_step_used: f64,
    pub max_error_estimate: f64,
    /// `max |E(t) − E(0)|` over the samples; only meaningful for autonomous potentials.
    pub energy_drift: Option<f64>,
}

/// Samples of an integrated orbit, in increasing time order.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub states: Vec<ELState>,
    pub final_state: ELState,
    pub summary: RunSummary,
}

impl Trajectory {
    /// The orbit as a sampled curve with velocities.
    pub fn curve(&self) -> Result<SampledCurve> {
        let times = self.states.iter().map(|s| s.time).collect();
        let points = self.states.iter().map(|s| s.position).collect();
        let vel = self.states.iter().map(|s| s.velocity).collect();
        SampledCurve::new(times, points)?.with_velocities(vel)
    }
}

/// Coordinate acceleration of the Euler–Lagrange equation.
///
/// For the metric `λ²|dz|²` with `λ = 2/(1−|z|²)` the geodesic spray is
/// `−2(∇φ·v) v + |v|² ∇φ` with `φ = ln λ`, `∇φ = 2z/(1−|z|²)`; the force is the
/// metric gradient `−grad V`.
fn acceleration(l: &MechanicalLagrangian, z: Complex64, v: Complex64, t: f64) -> Result<Complex64> {
    let x = DiskPoint::from_complex(z)?;
    let gphi = z * (2.0 / (1.0 - z.norm_sqr()));
    let dot = gphi.re * v.re + gphi.im * v.im;
    let spray = -v * (2.0 * dot) + gphi * v.norm_sqr();
    Ok(spray - l.potential().gradient(&x, t).v)
}

/// `(velocity, acceleration)` at a state, both based at its position.
pub fn el_vector_field(l: &MechanicalLagrangian, state: &ELState) -> Result<(TangentVec, TangentVec)> {
    let a = acceleration(l, state.position.z(), state.velocity.v, state.time)?;
    Ok((state.velocity, TangentVec::new(state.position, a)))
}

type Y = (Complex64, Complex64);

fn rk4(l: &MechanicalLagrangian, (z, v): Y, t: f64, h: f64) -> Result<Y> {
    let a1 = acceleration(l, z, v, t)?;
    let (z2, v2) = (z + v * (0.5 * h), v + a1 * (0.5 * h));
    let a2 = acceleration(l, z2, v2, t + 0.5 * h)?;
    let (z3, v3) = (z + v2 * (0.5 * h), v + a2 * (0.5 * h));
    let a3 = acceleration(l, z3, v3, t + 0.5 * h)?;
    let (z4, v4) = (z + v3 * h, v + a3 * h);
    let a4 = acceleration(l, z4, v4, t + h)?;
    let z_new = z + (v + v2 * 2.0 + v3 * 2.0 + v4) * (h / 6.0);
    let v_new = v + (a1 + a2 * 2.0 + a3 * 2.0 + a4) * (h / 6.0);
    DiskPoint::from_complex(z_new)?;
    Ok((z_new, v_new))
}

fn error_norm(a: Y, b: Y) -> f64 {
    let lam = 2.0 / (1.0 - a.0.norm_sqr());
    lam * ((a.0 - b.0).norm() + (a.1 - b.1).norm())
}

/// The error estimate that rounding of the coordinates alone produces at `y`; far from
/// the center it exceeds any fixed tolerance, so the controller never asks for less.
fn rounding_floor(y: Y) -> f64 {
    let lam = 2.0 / (1.0 - y.0.norm_sqr());
    16.0 * lam * f64::EPSILON
}

/// Integrates the Euler–Lagrange flow for time `duration` (either sign) from `state`.
///
/// Classical RK4 with step doubling: each step is compared against two half steps,
/// accepted when the difference is below tolerance, and the Richardson-corrected
/// value is kept. Steps that leave the disk or fail the tolerance are shrunk. The
/// tolerance is floored at the rounding level of the disk coordinates.
pub fn integrate_el(
    l: &MechanicalLagrangian,
    state: &ELState,
    duration: f64,
    control: &StepControl,
) -> Result<Trajectory> {
    if !duration.is_finite() {
        return Err(Error::InvalidArgument(format!("duration {duration} must be finite")));
    }
    if !(control.tolerance > 0.0 && control.min_step > 0.0 && control.max_step >= control.min_step)
    {
        return Err(Error::InvalidArgument("invalid step control".into()));
    }
    let sign = if duration < 0.0 { -1.0 } else { 1.0 };
    let t0 = state.time;
    let t_end = t0 + duration;
    let targets: Vec<f64> = match control.output_spacing {
        Some(sp) if sp > 0.0 => {
            let n = (duration.abs() / sp - 1e-9).ceil().max(1.0) as usize;
            (1..=n)
                .map(|k| if k == n { t_end } else { t0 + sign * sp * k as f64 })
                .collect()
        }
        Some(sp) => return Err(Error::InvalidArgument(format!("output spacing {sp} must be > 0"))),
        None => vec![t_end],
    };
    let every_step = control.output_spacing.is_none();

    let mut y: Y = (state.position.z(), state.velocity.v);
    let mut t = t0;
    let mut h = control.initial_step.clamp(control.min_step, control.max_step);
    let mut states = vec![*state];
    let mut summary = RunSummary {
        initial_position: [state.position.x(), state.position.y()],
        initial_velocity: [state.velocity.v.re, state.velocity.v.im],
        initial_time: t0,
        duration,
        accepted_steps: 0,
        rejected_steps: 0,
        min_step_used: f64::INFINITY,
        max_step_used: 0.0,
        max_error_estimate: 0.0,
        energy_drift: None,
    };

    if duration != 0.0 {
        for &target in &targets {
            while (target - t) * sign > 0.0 {
                let remaining = (target - t).abs();
                let last = h >= remaining;
                let step = if last { remaining } else { h };
                let full = rk4(l, y, t, sign * step);
                let halves = rk4(l, y, t, sign * step * 0.5)
                    .and_then(|mid| rk4(l, mid, t + sign * step * 0.5, sign * step * 0.5));
                let (err, outside) = match (&full, &halves) {
                    (Ok(a), Ok(b)) => (error_norm(*b, *a) / 15.0, false),
                    _ => (f64::INFINITY, true),
                };
                let tol = control.tolerance.max(rounding_floor(y));
                if err <= tol {
                    let (a, b) = (full?, halves?);
                    y = (b.0 + (b.0 - a.0) / 15.0, b.1 + (b.1 - a.1) / 15.0);
                    DiskPoint::from_complex(y.0)?;
                    t = if last { target } else { t + sign * step };
                    summary.accepted_steps += 1;
                    summary.min_step_used = summary.min_step_used.min(step);
                    summary.max_step_used = summary.max_step_used.max(step);
                    summary.max_error_estimate = summary.max_error_estimate.max(err);
                    if every_step || last {
                        let x = DiskPoint::from_complex(y.0)?;
                        states.push(ELState::new(x, y.1, t));
                    }
                    if !last {
                        let grow = if err == 0.0 {
                            2.0
                        } else {
                            (0.9 * (tol / err).powf(0.2)).min(2.0)
                        };
                        h = (h * grow).min(control.max_step);
                    }
                } else {
                    summary.rejected_steps += 1;
                    let shrink = if outside {
                        0.5
                    } else {
                        (0.9 * (tol / err).powf(0.2)).clamp(0.1, 0.5)
                    };
                    h = step * shrink;
                    if h < control.min_step {
                        return Err(match full.and(halves) {
                            Err(e) => e,
                            Ok(_) => Error::StepUnderflow { t, step: h },
                        });
                    }
                }
            }
        }
    }
    if summary.accepted_steps == 0 {
        summary.min_step_used = 0.0;
    }
    let pot = l.potential();
    if pot.is_zero() || pot.spec().time_amplitude == 0.0 {
        let e0 = l.energy(state);
        let drift = states
            .iter()
            .map(|s| (l.energy(s) - e0).abs())
            .fold(0.0, f64::max);
        summary.energy_drift = Some(drift);
    }
    if sign < 0.0 {
        states.reverse();
    }
    let final_state = if sign < 0.0 { states[0] } else { *states.last().unwrap() };
    Ok(Trajectory {
        states,
        final_state,
        summary,
    })
}
