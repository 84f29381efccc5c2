//! The surgery comparison: a curve that stalls is beaten by a rearranged one, a minimizer is not.

use std::sync::Arc;

use hyperlag::fuchsian::{build_octagon_group, EquivariantPotential, PotentialSpec};
use hyperlag::geometry::{dist, geodesic_interpolate, DiskPoint, SampledCurve};
use hyperlag::lagrangian::MechanicalLagrangian;
use hyperlag::minimizer::{solve_bvp, BVProblem, SolverSettings};
use hyperlag::qg::{surgery_compare, SurgeryInput};

fn main() -> hyperlag::Result<()> {
    let (group, domain) = build_octagon_group()?;
    let spec = PotentialSpec {
        centers: vec![[0.1, 0.0]],
        depth: 0.05,
        bump_radius: 1.0,
        time_amplitude: 0.5,
        orbit_cutoff: 1.0 + domain.diameter(),
    };
    let l = MechanicalLagrangian::new(Arc::new(EquivariantPotential::new(Arc::new(group), &domain, spec)?));
    let input = |k: f64, a_prime: f64, c: f64, d: f64| SurgeryInput {
        k,
        a_prime,
        b_prime: a_prime + 1.0,
        c,
        d,
        nodes_per_unit: 32,
        solver: SolverSettings::default(),
    };

    let p = DiskPoint::from_polar(1.5, 3.0)?;
    let q = DiskPoint::from_polar(1.5, 0.0)?;
    let r = DiskPoint::from_polar(2.0, -0.8)?;
    let stalled = SampledCurve::sample(0.0, 4.0, 129, |t| {
        if t <= 1.0 {
            geodesic_interpolate(&p, &q, t)
        } else if t <= 3.0 {
            Ok(q)
        } else {
            geodesic_interpolate(&q, &r, t - 3.0)
        }
    })?;
    let res = surgery_compare(&l, &stalled, &input(0.9 * dist(&p, &q), 0.0, 1.0, 3.0))?;
    println!("stalled curve: action saved by surgery {:.6} ({:?})", res.action_diff, res.case);

    let a = DiskPoint::from_polar(3.0, 2.8)?;
    let b = DiskPoint::from_polar(3.0, -0.3)?;
    let min = solve_bvp(&l, &BVProblem::new(a, b, 0.0, 6.0, 193))?.curve;
    let k = 0.9 * min.rho(0.0, 1.0)?;
    let res = surgery_compare(&l, &min, &input(k, 0.0, 2.0, 4.0))?;
    println!("minimizer: action saved by surgery {:.2e}", res.action_diff);
    Ok(())
}
