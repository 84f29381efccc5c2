use std::f64::consts::TAU;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::group::{FuchsianGroup, FundamentalDomain, DEFAULT_REDUCTION_BUDGET};
use crate::error::{Error, Result};
use crate::geometry::{dist, log_map, DiskPoint, TangentVec};

/// Parameters of a bump potential, as they appear in experiment configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    /// Bump centers in disk coordinates, inside the fundamental domain.
    pub centers: Vec<[f64; 2]>,
    pub depth: f64,
    pub bump_radius: f64,
    pub time_amplitude: f64,
    /// Radius of the orbit enumeration around each center.
    pub orbit_cutoff: f64,
}

/// `V(x, t) = (1 + A cos 2πt) Σ_{g, c} -depth · φ(d(x, g·c) / r)` with `φ(u) = (1 - u²)³`.
///
/// Invariant under the group by construction: points are first reduced to the
/// fundamental domain, then summed against every orbit image of the centers within
/// `orbit_cutoff`. With `orbit_cutoff >= bump_radius + diameter` the truncation is exact.
#[derive(Clone, Debug)]
pub struct EquivariantPotential {
    spec: PotentialSpec,
    group: Option<Arc<FuchsianGroup>>,
    sources: Vec<DiskPoint>,
}

impl EquivariantPotential {
    /// `V ≡ 0`.
    pub fn zero() -> Self {
        EquivariantPotential {
            spec: PotentialSpec {
                centers: Vec::new(),
                depth: 0.0,
                bump_radius: 0.0,
                time_amplitude: 0.0,
                orbit_cutoff: 0.0,
            },
            group: None,
            sources: Vec::new(),
        }
    }

    pub fn new(
        group: Arc<FuchsianGroup>,
        domain: &FundamentalDomain,
        spec: PotentialSpec,
    ) -> Result<Self> {
        if !(spec.depth > 0.0) {
            return Err(Error::InvalidArgument(format!("depth {} must be > 0", spec.depth)));
        }
        if !(spec.bump_radius > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "bump_radius {} must be > 0",
                spec.bump_radius
            )));
        }
        if !(0.0..1.0).contains(&spec.time_amplitude) {
            return Err(Error::InvalidArgument(format!(
                "time_amplitude {} must lie in [0, 1)",
                spec.time_amplitude
            )));
        }
        if domain.is_compact() && spec.orbit_cutoff < spec.bump_radius + domain.diameter() {
            return Err(Error::InvalidArgument(format!(
                "orbit_cutoff {} below bump_radius + diameter = {}",
                spec.orbit_cutoff,
                spec.bump_radius + domain.diameter()
            )));
        }
        let mut sources = Vec::new();
        for c in &spec.centers {
            let c = DiskPoint::new(c[0], c[1])?;
            if !group.satisfies_dirichlet(&c, 1e-9) {
                return Err(Error::InvalidArgument(format!(
                    "bump center {:?} lies outside the fundamental domain",
                    c
                )));
            }
            sources.extend(
                group
                    .orbit_ball(&c, spec.orbit_cutoff)?
                    .into_iter()
                    .map(|(p, _)| p),
            );
        }
        Ok(EquivariantPotential {
            spec,
            group: Some(group),
            sources,
        })
    }

    pub fn spec(&self) -> &PotentialSpec {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.sources.is_empty()
    }

    pub fn group(&self) -> Option<&Arc<FuchsianGroup>> {
        self.group.as_ref()
    }

    /// Orbit images of the bump centers used in the sums.
    pub fn sources(&self) -> &[DiskPoint] {
        &self.sources
    }

    fn time_factor(&self, t: f64) -> f64 {
        let tau = t.rem_euclid(1.0);
        1.0 + self.spec.time_amplitude * (TAU * tau).cos()
    }

    /// A lower bound for `V`: `-depth (1 + A)` times the largest number of bumps that
    /// can overlap at one point.
    pub fn min_value_bound(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r2 = 2.0 * self.spec.bump_radius;
        let overlap = self
            .spec
            .centers
            .iter()
            .filter_map(|c| DiskPoint::new(c[0], c[1]).ok())
            .map(|c| self.sources.iter().filter(|s| dist(&c, s) < r2).count())
            .max()
            .unwrap_or(1)
            .max(1);
        -self.spec.depth * (1.0 + self.spec.time_amplitude) * overlap as f64
    }

    fn reduce(&self, x: &DiskPoint) -> Option<(DiskPoint, crate::geometry::Isometry)> {
        let group = self.group.as_ref()?;
        group
            .reduce_with_element(x, DEFAULT_REDUCTION_BUDGET)
            .ok()
            .map(|(q, g, _)| (q, g))
    }

    /// `V(x, t)`.
    pub fn value(&self, x: &DiskPoint, t: f64) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let local = self.reduce(x).map(|(q, _)| q).unwrap_or(*x);
        let r = self.spec.bump_radius;
        let sum: f64 = self
            .sources
            .iter()
            .map(|s| {
                let u = dist(&local, s) / r;
                if u < 1.0 {
                    let w = 1.0 - u * u;
                    w * w * w
                } else {
                    0.0
                }
            })
            .sum();
        -self.spec.depth * self.time_factor(t) * sum
    }

    /// Metric gradient of `V(·, t)` at `x`.
    ///
    /// Uses `∇ₓ d(x, y) = -log_map(x, y) / d(x, y)`; for the bump profile the
    /// `1/d` cancels, leaving `-6 depth (1 - u²)² / r² · log_map(x, y)` per source.
    pub fn gradient(&self, x: &DiskPoint, t: f64) -> TangentVec {
        if self.is_zero() {
            return TangentVec::zero(*x);
        }
        let (local, element) = match self.reduce(x) {
            Some((q, g)) => (q, Some(g)),
            None => (*x, None),
        };
        let r = self.spec.bump_radius;
        let scale = -6.0 * self.spec.depth * self.time_factor(t) / (r * r);
        let mut g = TangentVec::zero(local);
        for s in &self.sources {
            let d = dist(&local, s);
            if d < r {
                let w = 1.0 - (d / r) * (d / r);
                g = g.add(&log_map(&local, s).scale(scale * w * w));
            }
        }
        // local = e·x, so the gradient at x is the pullback through e⁻¹
        let v = match element {
            Some(e) => e.inverse().differential(&g).map(|w| w.v).unwrap_or(g.v),
            None => g.v,
        };
        TangentVec::new(*x, v)
    }
}
