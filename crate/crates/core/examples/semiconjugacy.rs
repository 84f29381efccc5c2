//! Shadow geodesics of orbits, the averaged projection and the displacement rate.

use std::sync::Arc;

use hyperlag::fuchsian::{build_octagon_group, EquivariantPotential, PotentialSpec};
use hyperlag::geometry::DiskPoint;
use hyperlag::lagrangian::{ELState, MechanicalLagrangian, StepControl};
use hyperlag::semiconj::{choose_alpha, orbit_report, two_sided_orbit, OrbitShadow, DEFAULT_ALPHA_BUDGET};
use num_complex::Complex64;

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
    let control = StepControl {
        output_spacing: Some(0.05),
        ..StepControl::default()
    };
    let mut shadows = Vec::new();
    for v in [Complex64::new(0.6, 0.1), Complex64::new(-0.2, 0.6)] {
        let start = ELState::new(DiskPoint::new(0.05, 0.02)?, v, 0.0);
        shadows.push(OrbitShadow::new(two_sided_orbit(&l, &start, 8.0, &control)?)?);
    }
    let choice = choose_alpha(&shadows, DEFAULT_ALPHA_BUDGET)?;
    println!("alpha = {} (margin {:.4})", choice.alpha, choice.margin);
    for s in &shadows {
        let r = orbit_report(s, choice.alpha, &[0.25, 0.5, 1.0, 2.0], 1e-2, None)?;
        println!(
            "shadow geodesic [{:.4}, {:.4}], delta {:.2e}, min increment {:.4}, D* = {:.4} +- {:.4}",
            r.gamma_endpoints[0],
            r.gamma_endpoints[1],
            r.estimator_delta,
            r.min_sigma_bar_increment,
            r.d_star.estimate,
            r.d_star.halfwidth
        );
    }
    Ok(())
}
