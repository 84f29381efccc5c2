use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::check::{default_lambda_grid, qg_fit};
use crate::error::{Error, Result};
use crate::geometry::{dist, Geodesic, SampledCurve};
use crate::lagrangian::MechanicalLagrangian;
use crate::minimizer::{solve_bvp, BVProblem, SolverSettings};

/// Hyperbolic radius beyond which disk coordinates are too ill-conditioned.
pub const DEFAULT_HORIZON: f64 = 25.0;
/// Safety factor applied to the largest observed speed when measuring `K''`.
pub const SPEED_SAFETY: f64 = 1.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ShadowSettings {
    pub nodes_per_unit: usize,
    pub horizon: f64,
    /// Subsampling stride of the quasi-geodesic fit.
    pub qg_stride: usize,
    pub lambda_max: f64,
}

impl Default for ShadowSettings {
    fn default() -> Self {
        ShadowSettings {
            nodes_per_unit: 16,
            horizon: DEFAULT_HORIZON,
            qg_stride: 2,
            lambda_max: 4.0,
        }
    }
}

/// One row of the shadowing experiment: the minimizer on `[−N, N]` from `Γ(−KN)` to `Γ(KN)`.
#[derive(Clone, Debug, Serialize)]
pub struct ShadowReport {
    #[serde(rename = "N")]
    pub n: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub chord_hausdorff: f64,
    /// Extremes of `ρ` over node-aligned windows of length `>= N0`; `None` when no
    /// window is that long.
    pub window_speed_min: Option<f64>,
    pub window_speed_max: Option<f64>,
    pub windows_checked: usize,
    /// Smallest `ρ` over windows of length `>= 1`, a stronger check than the `N0` one.
    pub unit_window_speed_min: f64,
    /// Smallest `length / duration` over windows of length `> N0`.
    pub length_ratio_min: Option<f64>,
    pub lambda_fit: f64,
    pub epsilon_fit: f64,
    /// Boundary angles of the geodesic through `γ_N(−N/2)` and `γ_N(N/2)`.
    pub endpoint_angles: [f64; 2],
    pub max_node_speed: f64,
    pub action: f64,
    pub grad_norm: f64,
    pub converged: bool,
}

/// Largest `N` with `Γ(±KN)` inside the horizon.
pub fn max_safe_n(gamma: &Geodesic, k: f64, horizon: f64) -> f64 {
    (gamma.max_param_within(horizon) / k).max(0.0)
}

struct WindowStats {
    min: Option<f64>,
    max: Option<f64>,
    count: usize,
    unit_min: f64,
    length_ratio_min: Option<f64>,
}

fn window_stats(c: &SampledCurve, n0: f64) -> WindowStats {
    let (t, p) = (c.times(), c.points());
    let n = c.len();
    // prefix sums of polyline length
    let mut arc = vec![0.0; n];
    for k in 1..n {
        arc[k] = arc[k - 1] + dist(&p[k - 1], &p[k]);
    }
    let eps = 1e-9;
    // per start node: N0-window min and max, their count, unit-window min, length ratio
    type Row = (Option<f64>, Option<f64>, usize, f64, Option<f64>);
    let rows: Vec<Row> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (mut lo, mut hi, mut count, mut unit, mut ratio) =
                (None::<f64>, None::<f64>, 0, f64::INFINITY, None::<f64>);
            for j in i + 1..n {
                let span = t[j] - t[i];
                if span < 1.0 - eps {
                    continue;
                }
                let rho = dist(&p[i], &p[j]) / span;
                unit = unit.min(rho);
                if span >= n0 - eps {
                    count += 1;
                    lo = Some(lo.map_or(rho, |v| v.min(rho)));
                    hi = Some(hi.map_or(rho, |v| v.max(rho)));
                }
                if span > n0 + eps {
                    let r = (arc[j] - arc[i]) / span;
                    ratio = Some(ratio.map_or(r, |v| v.min(r)));
                }
            }
            (lo, hi, count, unit, ratio)
        })
        .collect();
    let fold_min = |a: Option<f64>, b: Option<f64>| match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    };
    let mut out = WindowStats {
        min: None,
        max: None,
        count: 0,
        unit_min: f64::INFINITY,
        length_ratio_min: None,
    };
    for (lo, hi, count, unit, ratio) in rows {
        out.min = fold_min(out.min, lo);
        out.max = match (out.max, hi) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, None) => x,
            (None, y) => y,
        };
        out.count += count;
        out.unit_min = out.unit_min.min(unit);
        out.length_ratio_min = fold_min(out.length_ratio_min, ratio);
    }
    out
}

/// Runs the shadowing experiment for each `N`; rows come back in input order,
/// together with the minimizers.
pub fn shadow_experiment(
    l: &MechanicalLagrangian,
    gamma: &Geodesic,
    k: f64,
    n_list: &[f64],
    n0: u64,
    solver: SolverSettings,
    settings: ShadowSettings,
) -> Result<Vec<(ShadowReport, SampledCurve)>> {
    if !(k > 0.0) {
        return Err(Error::InvalidArgument(format!("K = {k} must be > 0")));
    }
    let safe = max_safe_n(gamma, k, settings.horizon);
    for &n in n_list {
        if !(n > 0.0) {
            return Err(Error::InvalidArgument(format!("N = {n} must be > 0")));
        }
        for s in [-k * n, k * n] {
            let r = gamma.point_at(s).map(|p| p.radius()).unwrap_or(f64::INFINITY);
            if !(r <= settings.horizon) {
                return Err(Error::HorizonExceeded {
                    radius: r,
                    horizon: settings.horizon,
                    max_safe_n: safe,
                });
            }
        }
    }
    let lambda_grid = default_lambda_grid(settings.lambda_max);
    n_list
        .par_iter()
        .map(|&n| {
            let nodes = (2.0 * n * settings.nodes_per_unit as f64).round() as usize + 1;
            let prob = BVProblem::new(
                gamma.point_at(-k * n)?,
                gamma.point_at(k * n)?,
                -n,
                n,
                nodes.max(8),
            )
            .with_settings(solver);
            let res = solve_bvp(l, &prob)?;
            let c = &res.curve;
            let chord_hausdorff = c.hausdorff_to_geodesic(gamma, -k * n, k * n)?;
            let w = window_stats(c, n0 as f64);
            let fit = qg_fit(c, &lambda_grid, settings.qg_stride)?;
            let mid = Geodesic::through(&c.point_at_time(-0.5 * n)?, &c.point_at_time(0.5 * n)?)?;
            let max_node_speed = c.segment_speeds().into_iter().fold(0.0, f64::max);
            let report = ShadowReport {
                n,
                k,
                chord_hausdorff,
                window_speed_min: w.min,
                window_speed_max: w.max,
                windows_checked: w.count,
                unit_window_speed_min: w.unit_min,
                length_ratio_min: w.length_ratio_min,
                lambda_fit: fit.lambda,
                epsilon_fit: fit.epsilon,
                endpoint_angles: [mid.xi_minus().theta(), mid.xi_plus().theta()],
                max_node_speed,
                action: res.action,
                grad_norm: res.grad_norm,
                converged: res.converged,
            };
            Ok((report, res.curve))
        })
        .collect()
}

/// `K''` measured from an ensemble: the largest node speed times [`SPEED_SAFETY`].
pub fn measured_speed_bound<'a>(reports: impl IntoIterator<Item = &'a ShadowReport>) -> f64 {
    SPEED_SAFETY
        * reports
            .into_iter()
            .map(|r| r.max_node_speed)
            .fold(0.0, f64::max)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV with header `N,K,chord_hausdorff,speed_min,speed_max,lambda_fit,epsilon_fit`.
pub fn reports_to_csv(reports: &[ShadowReport]) -> String {
    let mut out = String::from("N,K,chord_hausdorff,speed_min,speed_max,lambda_fit,epsilon_fit\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.n,
            r.k,
            r.chord_hausdorff,
            opt(r.window_speed_min),
            opt(r.window_speed_max),
            r.lambda_fit,
            r.epsilon_fit
        ));
    }
    out
}
