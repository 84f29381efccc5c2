//! Mechanical Lagrangians `L = ½‖v‖² − V(x, t)` and their Euler–Lagrange flow.

mod flow;
mod ledger;

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fuchsian::EquivariantPotential;
use crate::geometry::{dist, DiskPoint, SampledCurve, TangentVec};

pub use flow::{el_vector_field, integrate_el, RunSummary, StepControl, Trajectory};
pub use ledger::ActionBoundLedger;

/// Superquadratic constant of every mechanical Lagrangian with `V <= 0`.
pub const SUPERQUADRATIC_C: f64 = 0.5;

/// A point of `TM × ℝ`: position, velocity based there, and raw time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ELState {
    pub position: DiskPoint,
    pub velocity: TangentVec,
    pub time: f64,
}

impl ELState {
    pub fn new(position: DiskPoint, v: Complex64, time: f64) -> Self {
        ELState {
            position,
            velocity: TangentVec::new(position, v),
            time,
        }
    }
}

/// `L(x, v, t) = ½‖v‖² − V(x, t)` with the hyperbolic metric as kinetic term.
#[derive(Clone, Debug)]
pub struct MechanicalLagrangian {
    potential: Arc<EquivariantPotential>,
}

impl MechanicalLagrangian {
    pub fn new(potential: Arc<EquivariantPotential>) -> Self {
        MechanicalLagrangian { potential }
    }

    /// The geodesic Lagrangian `½‖v‖²`.
    pub fn free() -> Self {
        Self::new(Arc::new(EquivariantPotential::zero()))
    }

    pub fn potential(&self) -> &EquivariantPotential {
        &self.potential
    }

    pub fn potential_arc(&self) -> &Arc<EquivariantPotential> {
        &self.potential
    }

    pub fn value(&self, state: &ELState) -> f64 {
        let v = state.velocity.norm();
        0.5 * v * v - self.potential.value(&state.position, state.time)
    }

    /// `E = ½‖v‖² + V`, conserved only when the potential is autonomous.
    pub fn energy(&self, state: &ELState) -> f64 {
        let v = state.velocity.norm();
        0.5 * v * v + self.potential.value(&state.position, state.time)
    }

    pub fn ledger(&self) -> ActionBoundLedger {
        ActionBoundLedger::new(SUPERQUADRATIC_C, self.potential.min_value_bound())
    }
}

/// Discrete action of a sampled curve: chord kinetic energy per segment plus the
/// trapezoid rule for the potential term,
/// `Σ d(q_k, q_{k+1})² / (2 Δt_k) − Δt_k (V(q_k, t_k) + V(q_{k+1}, t_{k+1})) / 2`.
pub fn action(l: &MechanicalLagrangian, c: &SampledCurve) -> Result<f64> {
    if c.len() < 2 {
        return Err(Error::InvalidCurve("action needs at least two samples".into()));
    }
    Ok(action_of(l, c.times(), c.points()))
}

pub(crate) fn action_of(l: &MechanicalLagrangian, t: &[f64], q: &[DiskPoint]) -> f64 {
    let pot: Vec<f64> = q
        .iter()
        .zip(t)
        .map(|(x, &s)| l.potential().value(x, s))
        .collect();
    let mut total = 0.0;
    for k in 0..q.len() - 1 {
        let dt = t[k + 1] - t[k];
        let d = dist(&q[k], &q[k + 1]);
        total += 0.5 * d * d / dt - 0.5 * dt * (pot[k] + pot[k + 1]);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_lagrangian_is_kinetic() {
        let l = MechanicalLagrangian::free();
        let s = ELState::new(DiskPoint::new(0.3, 0.1).unwrap(), Complex64::new(0.2, 0.0), 0.3);
        let n = s.velocity.norm();
        assert_eq!(l.value(&s), 0.5 * n * n);
        assert_eq!(l.energy(&s), 0.5 * n * n);
    }

    #[test]
    fn geodesic_action() {
        // speed ln 3 from the origin to 0.5 over unit time
        let q = DiskPoint::new(0.5, 0.0).unwrap();
        let c = SampledCurve::sample(0.0, 1.0, 9, |t| {
            crate::geometry::geodesic_interpolate(&DiskPoint::ORIGIN, &q, t)
        })
        .unwrap();
        let a = action(&MechanicalLagrangian::free(), &c).unwrap();
        assert!((a - 0.5 * 3f64.ln().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn constant_curve_has_zero_action() {
        let p = DiskPoint::new(0.1, 0.1).unwrap();
        let c = SampledCurve::sample(0.0, 2.0, 5, |_| Ok(p)).unwrap();
        assert_eq!(action(&MechanicalLagrangian::free(), &c).unwrap(), 0.0);
    }
}
