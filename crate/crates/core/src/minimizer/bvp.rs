use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chain::{descend, grad_measure, ChainSpec};
use crate::error::{Error, Result};
use crate::geometry::{
    exp_map, geodesic_interpolate, log_map, uniform_times, DiskPoint, SampledCurve, TangentVec,
};
use crate::lagrangian::{action, action_of, MechanicalLagrangian};

/// A fixed-endpoint, fixed-time minimization problem.
#[derive(Clone, Debug, PartialEq)]
pub struct BVProblem {
    pub x_a: DiskPoint,
    pub x_b: DiskPoint,
    pub a: f64,
    pub b: f64,
    /// Number of nodes, endpoints included.
    pub n: usize,
    pub settings: SolverSettings,
}

/// Solver knobs shared by every minimization, as they appear in experiment configs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSettings {
    pub tol_grad: f64,
    /// Additional descents from perturbed initial curves.
    pub restarts: usize,
    pub max_iter: usize,
    /// Seed for the restart perturbations.
    pub seed: u64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            tol_grad: 1e-8,
            restarts: 2,
            max_iter: 5000,
            seed: 0,
        }
    }
}

impl BVProblem {
    pub fn new(x_a: DiskPoint, x_b: DiskPoint, a: f64, b: f64, n: usize) -> Self {
        BVProblem {
            x_a,
            x_b,
            a,
            b,
            n,
            settings: SolverSettings::default(),
        }
    }

    pub fn with_settings(mut self, settings: SolverSettings) -> Self {
        self.settings = settings;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.b > self.a) {
            return Err(Error::InvalidInterval {
                a: self.a,
                b: self.b,
            });
        }
        if self.n < 8 {
            return Err(Error::InvalidArgument(format!("n = {} must be >= 8", self.n)));
        }
        if !(self.settings.tol_grad > 0.0) {
            return Err(Error::InvalidArgument("tol_grad must be > 0".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct MinimizeResult {
    pub curve: SampledCurve,
    pub action: f64,
    pub grad_norm: f64,
    pub el_residual: f64,
    pub restarts_agree: bool,
    pub iterations: usize,
    pub converged: bool,
    /// Final action of every descent, the unperturbed one first.
    pub restart_actions: Vec<f64>,
}

/// The JSON summary written next to the curve CSV.
#[derive(Clone, Debug, Serialize)]
pub struct MinimizeSummary {
    pub x_a: [f64; 2],
    pub x_b: [f64; 2],
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub action: f64,
    pub grad_norm: f64,
    pub el_residual: f64,
    pub restarts_agree: bool,
    pub converged: bool,
    pub iterations: usize,
}

impl MinimizeResult {
    pub fn summary(&self) -> MinimizeSummary {
        let (p, q) = (self.curve.first(), self.curve.last());
        MinimizeSummary {
            x_a: [p.x(), p.y()],
            x_b: [q.x(), q.y()],
            a: self.curve.start_time(),
            b: self.curve.end_time(),
            n: self.curve.len(),
            action: self.action,
            grad_norm: self.grad_norm,
            el_residual: self.el_residual,
            restarts_agree: self.restarts_agree,
            converged: self.converged,
            iterations: self.iterations,
        }
    }
}

/// Metric gradient of the discrete action at the interior nodes.
///
/// `G_k = −log(q_k, q_{k+1})/Δt_k − log(q_k, q_{k−1})/Δt_{k−1} − (Δt_{k−1} + Δt_k)/2 · grad V(q_k, t_k)`.
pub fn action_gradient(
    l: &MechanicalLagrangian,
    times: &[f64],
    points: &[DiskPoint],
) -> Vec<TangentVec> {
    (1..points.len() - 1)
        .map(|k| {
            let (dt0, dt1) = (times[k] - times[k - 1], times[k + 1] - times[k]);
            let fwd = log_map(&points[k], &points[k + 1]).scale(-1.0 / dt1);
            let back = log_map(&points[k], &points[k - 1]).scale(-1.0 / dt0);
            let force = l
                .potential()
                .gradient(&points[k], times[k])
                .scale(-0.5 * (dt0 + dt1));
            fwd.add(&back).add(&force)
        })
        .collect()
}

fn node_scales(times: &[f64]) -> Vec<f64> {
    (1..times.len() - 1)
        .map(|k| 0.5 * (times[k + 1] - times[k - 1]))
        .collect()
}

/// Largest metric-normalized defect of the discrete Euler–Lagrange equation,
/// `max_k |G_k| / ((Δt_{k−1} + Δt_k)/2)` over interior nodes.
pub fn el_residual(l: &MechanicalLagrangian, curve: &SampledCurve) -> Result<f64> {
    if curve.len() < 3 {
        return Err(Error::InvalidCurve("E-L residual needs at least three nodes".into()));
    }
    let g = action_gradient(l, curve.times(), curve.points());
    Ok(grad_measure(&g, &node_scales(curve.times())))
}

fn chord(prob: &BVProblem, times: &[f64]) -> Result<Vec<DiskPoint>> {
    let span = prob.b - prob.a;
    times
        .iter()
        .map(|t| geodesic_interpolate(&prob.x_a, &prob.x_b, (t - prob.a) / span))
        .collect()
}

/// Smooth low-mode perturbation of the interior nodes, vanishing at the ends.
fn perturbed(points: &[DiskPoint], scale: f64, rng: &mut ChaCha8Rng) -> Result<Vec<DiskPoint>> {
    let n = points.len();
    let modes: Vec<Complex64> = (0..3)
        .map(|_| Complex64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..2.0 * PI)))
        .collect();
    let mut out = points.to_vec();
    for (k, p) in out.iter_mut().enumerate().take(n - 1).skip(1) {
        let u = k as f64 / (n - 1) as f64;
        let w: Complex64 = modes
            .iter()
            .enumerate()
            .map(|(m, c)| c * (PI * (m + 1) as f64 * u).sin() / (m + 1) as f64)
            .sum();
        // the coordinate vector w/λ has metric norm |w|
        let v = TangentVec::new(*p, w / p.conformal_factor());
        *p = exp_map(&v, scale)?;
    }
    Ok(out)
}

/// Scale of restart perturbations: half the bump radius, or 1/4 without a potential.
fn perturbation_scale(l: &MechanicalLagrangian) -> f64 {
    if l.potential().is_zero() {
        0.25
    } else {
        0.5 * l.potential().spec().bump_radius
    }
}

/// Minimizes the discrete action between fixed endpoints.
///
/// Starts from the uniformly sampled geodesic chord, then runs `restarts` further
/// descents from smooth random perturbations of it; the lowest action wins.
pub fn solve_bvp(l: &MechanicalLagrangian, prob: &BVProblem) -> Result<MinimizeResult> {
    prob.validate()?;
    let times = uniform_times(prob.a, prob.b, prob.n);
    solve_on_grid(l, prob, times)
}

pub(crate) fn solve_on_grid(
    l: &MechanicalLagrangian,
    prob: &BVProblem,
    times: Vec<f64>,
) -> Result<MinimizeResult> {
    let base = chord(prob, &times)?;
    let weights: Vec<f64> = times.windows(2).map(|w| 1.0 / (w[1] - w[0])).collect();
    let objective = |pts: &[DiskPoint]| action_of(l, &times, pts);
    let gradient = |pts: &[DiskPoint]| action_gradient(l, &times, pts);
    let spec = ChainSpec {
        weights,
        node_scale: node_scales(&times),
        objective: &objective,
        gradient: &gradient,
        tol: prob.settings.tol_grad,
        max_iter: prob.settings.max_iter,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(prob.settings.seed);
    let scale = perturbation_scale(l);
    let mut inits = vec![base.clone()];
    for _ in 0..prob.settings.restarts {
        inits.push(perturbed(&base, scale, &mut rng)?);
    }
    let outcomes: Vec<_> = inits.into_par_iter().map(|init| descend(&spec, init)).collect();
    let restart_actions: Vec<f64> = outcomes.iter().map(|o| o.value).collect();
    let best = outcomes
        .into_iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)))
        .map(|(_, o)| o)
        .expect("at least one descent");
    let spread = restart_actions
        .iter()
        .map(|a| (a - best.value).abs())
        .fold(0.0, f64::max);
    let restarts_agree = spread <= 1e-6 * best.value.abs().max(1e-6);
    let curve = SampledCurve::new(times, best.points)?;
    let el = el_residual(l, &curve)?;
    Ok(MinimizeResult {
        action: best.value,
        grad_norm: best.grad_norm,
        el_residual: el,
        restarts_agree,
        iterations: best.iterations,
        converged: best.converged,
        restart_actions,
        curve,
    })
}

/// Outcome of re-solving random sub-intervals of a minimizer.
#[derive(Clone, Debug, Serialize)]
pub struct SubsegmentReport {
    /// `(c, d, relative excess)` for each sampled sub-interval.
    pub samples: Vec<(f64, f64, f64)>,
    pub max_excess: f64,
    /// True when every excess is below `1e-5`; a tolerance-level certificate, not a proof.
    pub certified: bool,
}

/// Re-solves `samples` random node-aligned sub-intervals `[c, d]` with the curve's own
/// endpoints and reports the relative action excess of the restriction.
pub fn verify_subsegment_minimality(
    l: &MechanicalLagrangian,
    curve: &SampledCurve,
    samples: usize,
    settings: SolverSettings,
) -> Result<SubsegmentReport> {
    let n = curve.len();
    if n < 9 {
        return Err(Error::InvalidCurve("need at least nine nodes".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed ^ 0x5eed);
    let picks: Vec<(usize, usize)> = (0..samples)
        .map(|_| {
            let i = rng.gen_range(0..n - 8);
            let j = rng.gen_range(i + 7..n);
            (i, j)
        })
        .collect();
    let rows: Vec<(f64, f64, f64)> = picks
        .into_par_iter()
        .map(|(i, j)| {
            let times = curve.times()[i..=j].to_vec();
            let pts = curve.points()[i..=j].to_vec();
            let restricted = SampledCurve::new(times.clone(), pts.clone())?;
            let own = action(l, &restricted)?;
            let prob = BVProblem {
                x_a: pts[0],
                x_b: pts[pts.len() - 1],
                a: times[0],
                b: times[times.len() - 1],
                n: times.len(),
                settings,
            };
            let best = solve_on_grid(l, &prob, times.clone())?;
            let excess = (own - best.action) / best.action.abs().max(1e-12);
            Ok((times[0], times[times.len() - 1], excess))
        })
        .collect::<Result<_>>()?;
    let max_excess = rows.iter().map(|r| r.2).fold(f64::NEG_INFINITY, f64::max);
    Ok(SubsegmentReport {
        certified: max_excess < 1e-5,
        max_excess,
        samples: rows,
    })
}
