//! Minimizing segments between fixed endpoints, with and without a potential.

use std::sync::Arc;

use hyperlag::fuchsian::{build_octagon_group, EquivariantPotential, PotentialSpec};
use hyperlag::geometry::{dist, DiskPoint};
use hyperlag::lagrangian::MechanicalLagrangian;
use hyperlag::minimizer::{solve_bvp, verify_subsegment_minimality, BVProblem, SolverSettings};

fn main() -> hyperlag::Result<()> {
    let p = DiskPoint::new(-0.6, 0.3)?;
    let q = DiskPoint::new(0.85, -0.4)?;
    let prob = BVProblem::new(p, q, 0.0, 3.0, 256);

    // without a potential the minimizer is the geodesic at constant speed
    let free = solve_bvp(&MechanicalLagrangian::free(), &prob)?;
    let d = dist(&p, &q);
    let exact = 0.5 * d * d / 3.0;
    println!("V = 0: action {:.12}, exact {exact:.12}, relative error {:.2e}", free.action, (free.action - exact).abs() / exact);

    let (group, domain) = build_octagon_group()?;
    let spec = PotentialSpec {
        centers: vec![[0.1, 0.0]],
        depth: 0.05,
        bump_radius: 1.0,
        time_amplitude: 0.5,
        orbit_cutoff: 1.0 + domain.diameter(),
    };
    let l = MechanicalLagrangian::new(Arc::new(EquivariantPotential::new(Arc::new(group), &domain, spec)?));
    let res = solve_bvp(&l, &prob.clone().with_settings(SolverSettings { restarts: 3, ..SolverSettings::default() }))?;
    println!(
        "bump: action {:.12}, E-L residual {:.2e}, {} iterations, restarts agree: {}",
        res.action, res.el_residual, res.iterations, res.restarts_agree
    );
    let cert = verify_subsegment_minimality(&l, &res.curve, 4, SolverSettings::default())?;
    println!("largest subsegment excess {:.2e} (certified: {})", cert.max_excess, cert.certified);
    Ok(())
}
