//! Integrates the Euler–Lagrange flow of a shallow time-periodic bump potential.

use std::sync::Arc;

use hyperlag::fuchsian::{build_octagon_group, EquivariantPotential, PotentialSpec};
use hyperlag::geometry::DiskPoint;
use hyperlag::lagrangian::{integrate_el, ELState, MechanicalLagrangian, StepControl};
use num_complex::Complex64;

fn main() -> hyperlag::Result<()> {
    let (group, domain) = build_octagon_group()?;
    let spec = PotentialSpec {
        centers: vec![[0.1, 0.0]],
        depth: 0.05,
        bump_radius: 1.0,
        time_amplitude: 0.0,
        orbit_cutoff: 1.0 + domain.diameter(),
    };
    let l = MechanicalLagrangian::new(Arc::new(EquivariantPotential::new(Arc::new(group), &domain, spec)?));
    let start = ELState::new(DiskPoint::new(0.05, -0.1)?, Complex64::new(0.8, 0.4), 0.0);
    let control = StepControl {
        output_spacing: Some(0.5),
        ..StepControl::default()
    };
    let traj = integrate_el(&l, &start, 5.0, &control)?;
    for s in &traj.states {
        println!("t = {:4.1}  z = ({:+.6}, {:+.6})  E = {:.12}", s.time, s.position.x(), s.position.y(), l.energy(s));
    }
    let sum = &traj.summary;
    println!(
        "{} accepted and {} rejected steps; energy drift {:.2e}",
        sum.accepted_steps,
        sum.rejected_steps,
        sum.energy_drift.unwrap_or(f64::NAN)
    );
    Ok(())
}
