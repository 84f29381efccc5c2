use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{dist, SampledCurve};

/// Which inequality of the quasi-geodesic definition binds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `d(γ(c), γ(d)) >= (d − c)/λ − ε`
    Lower,
    /// `d(γ(c), γ(d)) <= λ (d − c) + ε`
    Upper,
}

/// The sample pair with the largest violation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WorstPair {
    pub c: f64,
    pub d: f64,
    pub side: Side,
    /// Smallest `ε` that this pair alone would accept.
    pub violation: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QGCheck {
    pub ok: bool,
    pub worst_pair: Option<WorstPair>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QGFit {
    pub lambda: f64,
    pub epsilon: f64,
    pub worst_pair: Option<WorstPair>,
}

fn pair_violation(lambda: f64, span: f64, d: f64) -> (f64, Side) {
    let lower = span / lambda - d;
    let upper = d - lambda * span;
    if lower >= upper {
        (lower, Side::Lower)
    } else {
        (upper, Side::Upper)
    }
}

fn subsample(n: usize, stride: usize) -> Vec<usize> {
    let stride = stride.max(1);
    let mut idx: Vec<usize> = (0..n).step_by(stride).collect();
    if *idx.last().unwrap() != n - 1 {
        idx.push(n - 1);
    }
    idx
}

/// Worst pair over all sample pairs for one `λ`.
fn worst(c: &SampledCurve, lambda: f64, stride: usize) -> Option<WorstPair> {
    let idx = subsample(c.len(), stride);
    let (t, p) = (c.times(), c.points());
    idx.par_iter()
        .enumerate()
        .filter_map(|(a, &i)| {
            idx[a + 1..]
                .iter()
                .map(|&j| {
                    let (v, side) = pair_violation(lambda, t[j] - t[i], dist(&p[i], &p[j]));
                    WorstPair {
                        c: t[i],
                        d: t[j],
                        side,
                        violation: v,
                    }
                })
                .reduce(|x, y| if y.violation > x.violation { y } else { x })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .reduce(|x, y| if y.violation > x.violation { y } else { x })
}

fn validate(lambda: f64) -> Result<()> {
    if !(lambda >= 1.0) {
        return Err(Error::InvalidArgument(format!("lambda {lambda} must be >= 1")));
    }
    Ok(())
}

/// Tests the `(λ, ε)` inequalities on every pair of (sub)samples.
pub fn qg_check(c: &SampledCurve, lambda: f64, epsilon: f64, stride: usize) -> Result<QGCheck> {
    validate(lambda)?;
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} must be >= 0")));
    }
    let w = worst(c, lambda, stride);
    Ok(QGCheck {
        ok: w.is_none_or(|w| w.violation <= epsilon),
        worst_pair: w,
    })
}

/// For each grid `λ`, the least `ε` accepted by every pair; returns the smallest grid
/// point whose `ε` is within rounding (`1e-12`) of the best one.
pub fn qg_fit(c: &SampledCurve, lambda_grid: &[f64], stride: usize) -> Result<QGFit> {
    if lambda_grid.is_empty() {
        return Err(Error::InvalidArgument("empty lambda grid".into()));
    }
    let mut grid = lambda_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let mut fits = Vec::with_capacity(grid.len());
    for lambda in grid {
        validate(lambda)?;
        let w = worst(c, lambda, stride);
        fits.push(QGFit {
            lambda,
            epsilon: w.map_or(0.0, |w| w.violation.max(0.0)),
            worst_pair: w,
        });
    }
    let best = fits.iter().map(|f| f.epsilon).fold(f64::INFINITY, f64::min);
    Ok(*fits
        .iter()
        .find(|f| f.epsilon <= best + 1e-12)
        .unwrap())
}

/// `1, 1.25, 1.5, ...` up to `max`.
pub fn default_lambda_grid(max: f64) -> Vec<f64> {
    (0..)
        .map(|k| 1.0 + 0.25 * k as f64)
        .take_while(|l| *l <= max)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{DiskPoint, Geodesic};

    #[test]
    fn geodesic_is_one_zero_quasi_geodesic() {
        let g = Geodesic::through(&DiskPoint::ORIGIN, &DiskPoint::new(0.3, 0.2).unwrap()).unwrap();
        let c = SampledCurve::sample(0.0, 4.0, 41, |t| g.point_at(t)).unwrap();
        let fit = qg_fit(&c, &[1.0, 2.0], 1).unwrap();
        assert_eq!(fit.lambda, 1.0);
        assert!(fit.epsilon < 1e-12);
        assert!(qg_check(&c, 1.0, 1e-9, 1).unwrap().ok);
    }

    #[test]
    fn pause_breaks_the_lower_bound() {
        let p = DiskPoint::new(0.2, 0.2).unwrap();
        let c = SampledCurve::sample(0.0, 3.0, 31, |_| Ok(p)).unwrap();
        let chk = qg_check(&c, 2.0, 1.0, 1).unwrap();
        assert!(!chk.ok);
        let w = chk.worst_pair.unwrap();
        assert_eq!(w.side, Side::Lower);
        assert_eq!((w.c, w.d), (0.0, 3.0));
        assert!(qg_check(&c, 2.0, 1.5, 1).unwrap().ok);
        // the fit prefers the largest lambda
        let fit = qg_fit(&c, &[1.0, 2.0, 3.0], 1).unwrap();
        assert_eq!(fit.lambda, 3.0);
        assert!((fit.epsilon - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        let c = SampledCurve::sample(0.0, 1.0, 3, |_| Ok(DiskPoint::ORIGIN)).unwrap();
        assert!(qg_check(&c, 0.5, 0.0, 1).is_err());
        assert!(qg_check(&c, 1.0, -1.0, 1).is_err());
        assert!(qg_fit(&c, &[], 1).is_err());
    }
}
