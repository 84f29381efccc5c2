use serde::{Deserialize, Serialize};

use super::chain::{descend, ChainSpec};
use crate::error::{Error, Result};
use crate::fuchsian::EquivariantPotential;
use crate::geometry::{dist, exp_map, geodesic_interpolate, log_map, DiskPoint, TangentVec};

/// The twist map uses the potential frozen at this time slice.
const TWIST_TIME: f64 = 0.0;

/// `S(x, X) = ½ d(x, X)² + V(x)`.
pub fn generating_s(v: &EquivariantPotential, x: &DiskPoint, big_x: &DiskPoint) -> f64 {
    let d = dist(x, big_x);
    0.5 * d * d + v.value(x, TWIST_TIME)
}

/// `∂₁S(x, X) = −log_x X + grad V(x)`.
pub fn grad1_s(v: &EquivariantPotential, x: &DiskPoint, big_x: &DiskPoint) -> TangentVec {
    log_map(x, big_x)
        .scale(-1.0)
        .add(&v.gradient(x, TWIST_TIME))
}

/// `∂₂S(x, X) = −log_X x`.
pub fn grad2_s(x: &DiskPoint, big_x: &DiskPoint) -> TangentVec {
    log_map(big_x, x).scale(-1.0)
}

/// One step of the twist map defined by `p = −∂₁S(x, X)`, `P = ∂₂S(x, X)`.
///
/// Solving the first relation gives `X = exp_x(p + grad V(x))`; then `P = −log_X x`.
pub fn twist_step(v: &EquivariantPotential, x: &DiskPoint, p: &TangentVec) -> Result<(DiskPoint, TangentVec)> {
    let w = TangentVec::new(*x, p.v).add(&v.gradient(x, TWIST_TIME));
    let big_x = exp_map(&w, 1.0)?;
    Ok((big_x, grad2_s(x, &big_x)))
}

/// A finite orbit segment `x_n..x_m` of the twist map.
#[derive(Clone, Debug)]
pub struct TwistSequence {
    pub points: Vec<DiskPoint>,
    /// `p_k` at every point, recovered from `p_k = −∂₁S(x_k, x_{k+1})` and, at the last
    /// point, `p_m = ∂₂S(x_{m−1}, x_m)`.
    pub momenta: Option<Vec<TangentVec>>,
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Largest distance between the sequence and its replay under [`twist_step`].
    pub replay_error: Option<f64>,
}

/// Settings of [`minimize_w`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TwistSettings {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for TwistSettings {
    fn default() -> Self {
        TwistSettings {
            tol: 1e-12,
            max_iter: 10_000,
        }
    }
}

/// `W(x) = Σ S(x_k, x_{k+1})`.
pub fn w_sum(v: &EquivariantPotential, points: &[DiskPoint]) -> f64 {
    points.windows(2).map(|w| generating_s(v, &w[0], &w[1])).sum()
}

/// `∂W/∂x_k = ∂₂S(x_{k−1}, x_k) + ∂₁S(x_k, x_{k+1})` at the interior points.
pub fn w_gradient(v: &EquivariantPotential, points: &[DiskPoint]) -> Vec<TangentVec> {
    (1..points.len() - 1)
        .map(|k| grad2_s(&points[k - 1], &points[k]).add(&grad1_s(v, &points[k], &points[k + 1])))
        .collect()
}

/// Momenta of a sequence from the defining relations.
pub fn recover_momenta(v: &EquivariantPotential, points: &[DiskPoint]) -> Vec<TangentVec> {
    let n = points.len();
    let mut p: Vec<TangentVec> = (0..n - 1)
        .map(|k| grad1_s(v, &points[k], &points[k + 1]).scale(-1.0))
        .collect();
    p.push(grad2_s(&points[n - 2], &points[n - 1]));
    p
}

/// Iterates [`twist_step`] from `(x_0, p_0)` and reports the largest deviation from
/// the given points.
pub fn replay(v: &EquivariantPotential, points: &[DiskPoint], p0: &TangentVec) -> Result<f64> {
    let mut x = points[0];
    let mut p = *p0;
    let mut worst: f64 = 0.0;
    for target in &points[1..] {
        let (nx, np) = twist_step(v, &x, &p)?;
        worst = worst.max(dist(&nx, target));
        x = nx;
        p = np;
    }
    Ok(worst)
}

/// Finds a critical sequence of `W` with `steps` steps between fixed ends.
pub fn minimize_w(
    v: &EquivariantPotential,
    x_start: &DiskPoint,
    x_end: &DiskPoint,
    steps: usize,
    settings: TwistSettings,
) -> Result<TwistSequence> {
    if steps < 1 {
        return Err(Error::InvalidArgument("a sequence needs at least one step".into()));
    }
    let init: Vec<DiskPoint> = (0..=steps)
        .map(|k| geodesic_interpolate(x_start, x_end, k as f64 / steps as f64))
        .collect::<Result<_>>()?;
    let objective = |pts: &[DiskPoint]| w_sum(v, pts);
    let gradient = |pts: &[DiskPoint]| w_gradient(v, pts);
    let spec = ChainSpec {
        weights: vec![1.0; steps],
        node_scale: vec![1.0; steps.saturating_sub(1)],
        objective: &objective,
        gradient: &gradient,
        tol: settings.tol,
        max_iter: settings.max_iter,
    };
    let out = descend(&spec, init);
    let momenta = recover_momenta(v, &out.points);
    let replay_error = replay(v, &out.points, &momenta[0]).ok();
    Ok(TwistSequence {
        points: out.points,
        momenta: Some(momenta),
        grad_norm: out.grad_norm,
        iterations: out.iterations,
        converged: out.converged,
        replay_error,
    })
}
