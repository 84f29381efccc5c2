//! The regular-octagon surface group, Dirichlet reduction and an equivariant potential.

use std::sync::Arc;

use hyperlag::fuchsian::{build_octagon_group, EquivariantPotential, PotentialSpec};
use hyperlag::geometry::DiskPoint;

fn main() -> hyperlag::Result<()> {
    let (group, domain) = build_octagon_group()?;
    println!(
        "octagon: {} sides, vertex radius {:.6}, diameter {:.6}",
        domain.side_count(),
        domain.vertex_radius(),
        domain.diameter()
    );
    println!("relator residual {:.2e}", group.relator_residual());

    let far = DiskPoint::from_polar(6.0, 0.4)?;
    let (reduced, word) = group.reduce_to_domain(&far)?;
    println!(
        "point at radius 6 reduces to radius {:.6} with a word of length {}",
        reduced.radius(),
        word.len()
    );

    let group = Arc::new(group);
    let spec = PotentialSpec {
        centers: vec![[0.1, 0.0]],
        depth: 0.05,
        bump_radius: 1.0,
        time_amplitude: 0.5,
        orbit_cutoff: 1.0 + domain.diameter(),
    };
    let v = EquivariantPotential::new(group.clone(), &domain, spec)?;
    let x = DiskPoint::new(0.2, 0.1)?;
    let hx = group.generator(0).apply(&x)?;
    println!("V(x, 0.3) = {:.12}", v.value(&x, 0.3));
    println!("V(h x, 0.3) - V(x, 0.3) = {:.2e}", v.value(&hx, 0.3) - v.value(&x, 0.3));
    println!("lower bound of V: {}", v.min_value_bound());
    Ok(())
}
