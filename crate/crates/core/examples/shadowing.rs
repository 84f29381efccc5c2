//! Minimizers from Γ(−KN) to Γ(KN) stay near Γ: Hausdorff distance and quasi-geodesic fit.

use std::sync::Arc;

use hyperlag::fuchsian::{build_octagon_group, EquivariantPotential, PotentialSpec};
use hyperlag::geometry::{BoundaryPoint, Geodesic};
use hyperlag::lagrangian::MechanicalLagrangian;
use hyperlag::minimizer::SolverSettings;
use hyperlag::qg::{reports_to_csv, shadow_experiment, ShadowSettings};

fn main() -> hyperlag::Result<()> {
    let (group, domain) = build_octagon_group()?;
    let spec = PotentialSpec {
        centers: vec![[0.1, 0.0]],
        depth: 1e-4,
        bump_radius: 1.0,
        time_amplitude: 0.5,
        orbit_cutoff: 6.0,
    };
    let l = MechanicalLagrangian::new(Arc::new(EquivariantPotential::new(Arc::new(group), &domain, spec)?));
    let gamma = Geodesic::from_endpoints(BoundaryPoint::new(2.0), BoundaryPoint::new(5.5))?;
    let settings = ShadowSettings {
        nodes_per_unit: 16,
        ..ShadowSettings::default()
    };
    let solver = SolverSettings {
        restarts: 1,
        seed: 7,
        ..SolverSettings::default()
    };
    let rows = shadow_experiment(&l, &gamma, 2.0, &[2.0, 4.0], 128, solver, settings)?;
    let reports: Vec<_> = rows.into_iter().map(|r| r.0).collect();
    print!("{}", reports_to_csv(&reports));
    Ok(())
}
