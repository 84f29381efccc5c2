//! The cut-and-shift comparison curve used to show that long minimizers cannot stall.
//!
//! Given a unit interval `[a', b']` on which `γ` moves farther than `K` and a window
//! `[c, d]` of length `N0 = 2n` on which it is slow, the comparison curve slows down
//! on `[a', b''+n]`, replays a time-shifted copy of `γ`, and crosses the window with a
//! fresh minimizer. Time periodicity with integer `n` keeps the copied action equal.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{dist, SampledCurve};
use crate::lagrangian::{action, MechanicalLagrangian};
use crate::minimizer::{solve_bvp, BVProblem, SolverSettings};

const INTEGER_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SurgeryCase {
    /// The fast interval precedes the window.
    FastBefore,
    /// The fast interval follows the window.
    FastAfter,
}

#[derive(Clone, Debug)]
pub struct SurgeryResult {
    pub gamma_star: SampledCurve,
    /// `A(γ) − A(γ*)`; positive means the comparison curve is cheaper.
    pub action_diff: f64,
    /// The split point inside `[a', b']` at distance `K` from the far end.
    pub split: f64,
    pub case: SurgeryCase,
}

/// Parameters of [`surgery_compare`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurgeryInput {
    pub k: f64,
    pub a_prime: f64,
    pub b_prime: f64,
    pub c: f64,
    pub d: f64,
    pub nodes_per_unit: usize,
    pub solver: SolverSettings,
}

fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() < INTEGER_TOL
}

fn check(cond: bool, what: &str, failed: &mut Vec<String>) {
    if !cond {
        failed.push(what.to_string());
    }
}

/// Root of `f(s) = target` on `[lo, hi]` for increasing-crossing `f`, by bisection.
fn bisect(f: impl Fn(f64) -> Result<f64>, target: f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let increasing = f(hi)? >= f(lo)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid)? < target) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 * (1.0 + lo.abs()) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

enum Piece {
    Copy { from: f64, to: f64, shift: f64 },
    Solve { from: f64, to: f64, x_at: f64, y_at: f64 },
}

/// Builds the comparison curve and returns `A(γ) − A(γ*)`.
pub fn surgery_compare(
    l: &MechanicalLagrangian,
    gamma: &SampledCurve,
    input: &SurgeryInput,
) -> Result<SurgeryResult> {
    let (a, b) = (gamma.start_time(), gamma.end_time());
    let SurgeryInput {
        k,
        a_prime,
        b_prime,
        c,
        d,
        ..
    } = *input;
    let n = 0.5 * (d - c);
    let mut failed = Vec::new();
    check(k > 0.0, "K > 0", &mut failed);
    check(is_integer(b - a), "b - a is an integer", &mut failed);
    check((b_prime - a_prime - 1.0).abs() < INTEGER_TOL, "b' - a' = 1", &mut failed);
    check(a <= a_prime && b_prime <= b, "[a', b'] lies in [a, b]", &mut failed);
    check(is_integer(a_prime - a), "a' - a is an integer", &mut failed);
    check(a <= c && c < d && d <= b, "[c, d] lies in [a, b]", &mut failed);
    check(
        is_integer(n) && n >= 1.0,
        "d - c = N0 is a positive even integer",
        &mut failed,
    );
    check(is_integer(b - d), "b - d is an integer", &mut failed);
    let case = if b_prime <= c + INTEGER_TOL {
        Some(SurgeryCase::FastBefore)
    } else if d <= a_prime + INTEGER_TOL {
        Some(SurgeryCase::FastAfter)
    } else {
        None
    };
    check(case.is_some(), "[a', b'] is disjoint from (c, d)", &mut failed);
    if failed.is_empty() {
        let span = dist(&gamma.point_at_time(a_prime)?, &gamma.point_at_time(b_prime)?);
        check(span >= k, "d(γ(a'), γ(b')) >= K", &mut failed);
    }
    if !failed.is_empty() {
        return Err(Error::SurgeryConstraint(failed.join("; ")));
    }
    let case = case.unwrap();
    let n = n.round();

    let (split, pieces) = match case {
        SurgeryCase::FastBefore => {
            let x = gamma.point_at_time(a_prime)?;
            let split = bisect(
                |s| Ok(dist(&x, &gamma.point_at_time(s)?)),
                k,
                a_prime,
                b_prime,
            )?;
            let pieces = vec![
                Piece::Copy { from: a, to: a_prime, shift: 0.0 },
                Piece::Solve { from: a_prime, to: split + n, x_at: a_prime, y_at: split },
                Piece::Copy { from: split, to: c, shift: n },
                Piece::Solve { from: c + n, to: d, x_at: c, y_at: d },
                Piece::Copy { from: d, to: b, shift: 0.0 },
            ];
            (split, pieces)
        }
        SurgeryCase::FastAfter => {
            let y = gamma.point_at_time(b_prime)?;
            let split = bisect(
                |s| Ok(dist(&gamma.point_at_time(s)?, &y)),
                k,
                a_prime,
                b_prime,
            )?;
            let pieces = vec![
                Piece::Copy { from: a, to: c, shift: 0.0 },
                Piece::Solve { from: c, to: d - n, x_at: c, y_at: d },
                Piece::Copy { from: d, to: split, shift: -n },
                Piece::Solve { from: split - n, to: b_prime, x_at: split, y_at: b_prime },
                Piece::Copy { from: b_prime, to: b, shift: 0.0 },
            ];
            (split, pieces)
        }
    };

    let mut times: Vec<f64> = Vec::new();
    let mut points = Vec::new();
    let mut push = |seg: &SampledCurve| {
        let skip = usize::from(!times.is_empty());
        for (t, p) in seg.times().iter().zip(seg.points()).skip(skip) {
            times.push(*t);
            points.push(*p);
        }
    };
    for piece in &pieces {
        match *piece {
            Piece::Copy { from, to, shift } => {
                if to - from > INTEGER_TOL {
                    push(&gamma.restrict(from, to)?.shifted(shift));
                }
            }
            Piece::Solve { from, to, x_at, y_at } => {
                let nodes = ((to - from) * input.nodes_per_unit as f64).ceil() as usize + 1;
                let prob = BVProblem::new(
                    gamma.point_at_time(x_at)?,
                    gamma.point_at_time(y_at)?,
                    from,
                    to,
                    nodes.max(8),
                )
                .with_settings(input.solver);
                push(&solve_bvp(l, &prob)?.curve);
            }
        }
    }
    // copies and solves meet at equal times; snap away rounding in the shifted copies
    let mut merged_t: Vec<f64> = Vec::with_capacity(times.len());
    let mut merged_p = Vec::with_capacity(points.len());
    for (t, p) in times.into_iter().zip(points) {
        if merged_t.last().is_none_or(|&last| t > last + 1e-12) {
            merged_t.push(t);
            merged_p.push(p);
        }
    }
    let gamma_star = SampledCurve::new(merged_t, merged_p)?;
    let action_diff = action(l, gamma)? - action(l, &gamma_star)?;
    Ok(SurgeryResult {
        gamma_star,
        action_diff,
        split,
        case,
    })
}
