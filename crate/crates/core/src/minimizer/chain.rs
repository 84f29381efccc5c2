//! Descent on chains of points with fixed ends.
//!
//! Both the discrete action and the twist-map sum `W` are chain energies: a kinetic
//! part `Σ w_k d(x_k, x_{k+1})² / 2` plus node-local terms. The kinetic Hessian in
//! normal coordinates is close to the tridiagonal matrix `T` with diagonal
//! `w_{k-1} + w_k` and off-diagonal `-w_k`, which we use as a preconditioner.

use num_complex::Complex64;

use crate::error::Result;
use crate::geometry::{exp_map, log_map, DiskPoint, TangentVec};

pub(crate) struct ChainSpec<'a> {
    /// Edge weights, one per segment.
    pub weights: Vec<f64>,
    /// Normalization of the metric gradient norm at each interior node.
    pub node_scale: Vec<f64>,
    pub objective: &'a (dyn Fn(&[DiskPoint]) -> f64 + Sync),
    /// Metric gradient at the interior nodes.
    pub gradient: &'a (dyn Fn(&[DiskPoint]) -> Vec<TangentVec> + Sync),
    pub tol: f64,
    pub max_iter: usize,
}

pub(crate) struct ChainOutcome {
    pub points: Vec<DiskPoint>,
    pub value: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub(crate) fn grad_measure(grads: &[TangentVec], node_scale: &[f64]) -> f64 {
    grads
        .iter()
        .zip(node_scale)
        .map(|(g, s)| g.norm() / s)
        .fold(0.0, f64::max)
}

/// Solves `T y = rhs` on the interior nodes (Thomas algorithm).
fn solve_tridiagonal(weights: &[f64], rhs: &[Complex64]) -> Vec<Complex64> {
    let m = rhs.len();
    let mut c = vec![0.0; m];
    let mut d = vec![Complex64::new(0.0, 0.0); m];
    for i in 0..m {
        let diag = weights[i] + weights[i + 1];
        let lower = if i > 0 { -weights[i] } else { 0.0 };
        let denom = diag - lower * if i > 0 { c[i - 1] } else { 0.0 };
        c[i] = if i + 1 < m { -weights[i + 1] / denom } else { 0.0 };
        let prev = if i > 0 { d[i - 1] } else { Complex64::new(0.0, 0.0) };
        d[i] = (rhs[i] - prev * lower) / denom;
    }
    for i in (0..m.saturating_sub(1)).rev() {
        d[i] = d[i] - d[i + 1] * c[i];
    }
    d
}

fn t_inner(weights: &[f64], s: &[Complex64]) -> f64 {
    let dot = |a: Complex64, b: Complex64| a.re * b.re + a.im * b.im;
    let m = s.len();
    let mut total = 0.0;
    for i in 0..m {
        let mut ts = s[i] * (weights[i] + weights[i + 1]);
        if i > 0 {
            ts -= s[i - 1] * weights[i];
        }
        if i + 1 < m {
            ts -= s[i + 1] * weights[i + 1];
        }
        total += dot(s[i], ts);
    }
    total
}

fn moved(points: &[DiskPoint], dir: &[Complex64], alpha: f64) -> Result<Vec<DiskPoint>> {
    let n = points.len();
    let mut out = Vec::with_capacity(n);
    out.push(points[0]);
    for k in 1..n - 1 {
        out.push(exp_map(&TangentVec::new(points[k], dir[k - 1]), alpha)?);
    }
    out.push(points[n - 1]);
    Ok(out)
}

/// Relative objective rounding tolerated by the slope-based acceptance test.
const VALUE_NOISE: f64 = 1e-9;
const WOLFE_DELTA: f64 = 0.1;

/// `d/ds` of the objective at the end of a step of length `step`: the gradient paired
/// with each node's velocity, recovered as `−log(new, old)/step`.
fn end_slope(old: &[DiskPoint], new: &[DiskPoint], grads: &[TangentVec], step: f64) -> f64 {
    grads
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let vel = log_map(&new[i + 1], &old[i + 1]).v / -step;
            let lam = new[i + 1].conformal_factor();
            lam * lam * (g.v.re * vel.re + g.v.im * vel.im)
        })
        .sum()
}

/// The gradient measure that coordinate rounding alone produces: moving node `k` by
/// its representable resolution `λ_k ε_mach` shifts `G_k` by about that much times
/// `w_{k-1} + w_k`. Far from the disk center this exceeds any useful tolerance.
pub(crate) fn resolution_floor(points: &[DiskPoint], weights: &[f64], node_scale: &[f64]) -> f64 {
    (1..points.len().saturating_sub(1))
        .map(|k| {
            let res = points[k].conformal_factor() * f64::EPSILON;
            2.0 * res * (weights[k - 1] + weights[k]) / node_scale[k - 1]
        })
        .fold(0.0, f64::max)
}

/// Preconditioned gradient descent with Barzilai–Borwein step lengths and Armijo
/// backtracking.
pub(crate) fn descend(spec: &ChainSpec, init: Vec<DiskPoint>) -> ChainOutcome {
    let dot = |a: Complex64, b: Complex64| a.re * b.re + a.im * b.im;
    let mut points = init;
    let mut value = (spec.objective)(&points);
    let mut grads = (spec.gradient)(&points);
    let mut measure = grad_measure(&grads, &spec.node_scale);
    let mut alpha = 1.0;
    let mut iterations = 0;
    if points.len() <= 2 {
        return ChainOutcome {
            points,
            value,
            grad_norm: 0.0,
            iterations,
            converged: true,
        };
    }
    let target = |pts: &[DiskPoint]| spec.tol.max(resolution_floor(pts, &spec.weights, &spec.node_scale));
    while measure > target(&points) && iterations < spec.max_iter {
        iterations += 1;
        // gradient in normal coordinates at each node: λ G
        let g: Vec<Complex64> = grads.iter().map(|t| t.v * t.base.conformal_factor()).collect();
        let y = solve_tridiagonal(&spec.weights, &g);
        let dir: Vec<Complex64> = y
            .iter()
            .zip(&grads)
            .map(|(yk, t)| -yk / t.base.conformal_factor())
            .collect();
        let slope: f64 = -g.iter().zip(&y).map(|(a, b)| dot(*a, *b)).sum::<f64>();
        if !(slope < 0.0) {
            break;
        }
        // near the optimum the decrease drops below the rounding of the objective
        let noise = 1e-14 * value.abs();
        let mut step = alpha;
        let mut accepted = None;
        for _ in 0..60 {
            if let Ok(candidate) = moved(&points, &dir, step) {
                let v = (spec.objective)(&candidate);
                if v <= value + 1e-4 * step * slope + noise {
                    accepted = Some((candidate, v, None));
                    break;
                }
                // far from the disk center values carry more rounding than gradients;
                // fall back on the slope along the step, as in approximate Wolfe tests
                if v <= value + VALUE_NOISE * value.abs() {
                    let cand_grads = (spec.gradient)(&candidate);
                    if end_slope(&points, &candidate, &cand_grads, step) <= -(1.0 - 2.0 * WOLFE_DELTA) * slope {
                        accepted = Some((candidate, v, Some(cand_grads)));
                        break;
                    }
                }
            }
            step *= 0.5;
        }
        let Some((candidate, v, cand_grads)) = accepted else {
            break;
        };
        let new_grads = cand_grads.unwrap_or_else(|| (spec.gradient)(&candidate));
        let g_new: Vec<Complex64> = new_grads
            .iter()
            .map(|t| t.v * t.base.conformal_factor())
            .collect();
        // Barzilai–Borwein in the T-metric: s = step·(−y), y_diff = g_new − g
        let s: Vec<Complex64> = y.iter().map(|yk| -yk * step).collect();
        let sy: f64 = s
            .iter()
            .zip(g_new.iter().zip(&g))
            .map(|(sk, (a, b))| dot(*sk, a - b))
            .sum();
        let sts = t_inner(&spec.weights, &s);
        alpha = if sy > 0.0 { (sts / sy).clamp(1e-3, 1e3) } else { 1.0 };
        points = candidate;
        value = v;
        grads = new_grads;
        measure = grad_measure(&grads, &spec.node_scale);
    }
    let converged = measure <= target(&points);
    ChainOutcome {
        points,
        value,
        grad_norm: measure,
        iterations,
        converged,
    }
}
