//! The discrete twist map generated by `S(x, X) = d(x, X)²/2 − V(x)`.

use std::sync::Arc;

use hyperlag::fuchsian::{build_octagon_group, EquivariantPotential, PotentialSpec};
use hyperlag::geometry::{DiskPoint, TangentVec};
use hyperlag::minimizer::{minimize_w, twist_step, w_sum, TwistSettings};
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
    let v = EquivariantPotential::new(Arc::new(group), &domain, spec)?;

    let mut x = DiskPoint::new(0.1, 0.1)?;
    let mut p = TangentVec::new(x, Complex64::new(0.3, 0.1));
    for k in 0..5 {
        println!("x_{k} = ({:+.6}, {:+.6})", x.x(), x.y());
        (x, p) = twist_step(&v, &x, &p)?;
    }

    let a = DiskPoint::new(-0.5, 0.2)?;
    let b = DiskPoint::new(0.6, 0.3)?;
    let seq = minimize_w(&v, &a, &b, 8, TwistSettings::default())?;
    println!(
        "critical sequence of 8 steps: W = {:.12}, gradient {:.2e}, replay error {:.2e}",
        w_sum(&v, &seq.points),
        seq.grad_norm,
        seq.replay_error.unwrap_or(f64::NAN)
    );
    Ok(())
}
