use std::f64::consts::TAU;
use std::sync::Arc;

use hyperlag::fuchsian::{build_octagon_group, EquivariantPotential, PotentialSpec};
use hyperlag::geometry::{exp_map, DiskPoint, Geodesic, SampledCurve, TangentVec};
use hyperlag::lagrangian::{integrate_el, ELState, MechanicalLagrangian, StepControl};
use hyperlag::semiconj::{
    alpha_margin, choose_alpha, orbit_report, OrbitShadow, StartSet, DEFAULT_ALPHA_BUDGET,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn base_geodesic() -> Geodesic {
    Geodesic::through(&DiskPoint::new(-0.2, 0.05).unwrap(), &DiskPoint::new(0.1, 0.25).unwrap()).unwrap()
}

/// A point at signed distance `w` off the geodesic, above parameter `s`.
fn offset(g: &Geodesic, s: f64, w: f64) -> hyperlag::Result<DiskPoint> {
    let u = g.unit_tangent_at(s)?;
    exp_map(&TangentVec::new(u.base, u.v * Complex64::i()), w)
}

/// Moves along `g` with a backward swing each unit of time while drifting sideways.
fn wobbling_orbit(half: f64, per_unit: usize) -> SampledCurve {
    let g = base_geodesic();
    let n = (2.0 * half) as usize * per_unit + 1;
    SampledCurve::sample(-half, half, n, |t| {
        offset(&g, t + 0.8 * (TAU * t).sin(), 0.3 * (TAU * t / 3.0).sin())
    })
    .unwrap()
}

/// Steady motion except for one unit of time spent walking backward.
fn backtracking_orbit() -> SampledCurve {
    let g = base_geodesic();
    SampledCurve::sample(-8.0, 8.0, 16 * 8 + 1, |t| {
        g.point_at(t - 2.0 * t.clamp(0.0, 1.0))
    })
    .unwrap()
}

#[test]
fn wobbling_orbit_is_straightened_by_averaging() {
    let g = base_geodesic();
    let o = OrbitShadow::new(wobbling_orbit(10.0, 32)).unwrap();
    assert!(o.geodesic().xi_minus().angle_to(&g.xi_minus()) < 1e-3);
    assert!(o.geodesic().xi_plus().angle_to(&g.xi_plus()) < 1e-3);

    let choice = choose_alpha(std::slice::from_ref(&o), DEFAULT_ALPHA_BUDGET).unwrap();
    // any shorter window contains a net backward swing
    assert_eq!(choice.alpha, 1.0);
    assert!(alpha_margin(std::slice::from_ref(&o), choice.alpha, StartSet::Midpoints) > 0.0);
    let betas: Vec<f64> = (1..=12).map(|k| 0.25 * k as f64).collect();
    let mono = o.monotonicity_check(choice.alpha, &betas).unwrap();
    assert!(mono.raw_min_increment <= 0.0);
    assert!(mono.min_increment > 0.0, "{mono:?}");
}

#[test]
fn backtracking_forces_a_longer_window() {
    let o = OrbitShadow::new(backtracking_orbit()).unwrap();
    let choice = choose_alpha(&[o], DEFAULT_ALPHA_BUDGET).unwrap();
    assert!(choice.alpha > 1.0);
    assert_eq!(choice.alpha, 2.25);
}

#[test]
fn cocycle_identities_hold() {
    let o = OrbitShadow::new(wobbling_orbit(10.0, 32)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let triples: Vec<(f64, f64, f64)> = (0..1000)
        .map(|_| {
            let t0 = rng.gen_range(-10.0..0.0);
            (t0, rng.gen_range(0.0..5.0), rng.gen_range(0.0..5.0))
        })
        .collect();
    assert!(o.additivity_residual(&triples).unwrap() < 1e-6);
    assert!(o.subadditivity_residual(&triples).unwrap() <= 1e-9);
    for _ in 0..200 {
        let alpha = rng.gen_range(0.1..2.0);
        let beta = rng.gen_range(0.0..4.0);
        let t0 = rng.gen_range(-10.0..3.0);
        let lhs = o.fuller_average(alpha, t0 + beta).unwrap() - o.fuller_average(alpha, t0).unwrap();
        let rhs = o.telescoping_rhs(alpha, t0, beta).unwrap();
        assert!((lhs - rhs).abs() < 1e-6, "{lhs} {rhs}");
    }
    // increments add over concatenated windows
    let b = o.fuller_average(1.0, 2.0).unwrap() - o.fuller_average(1.0, -1.0).unwrap();
    let split = (o.fuller_average(1.0, 0.5).unwrap() - o.fuller_average(1.0, -1.0).unwrap())
        + (o.fuller_average(1.0, 2.0).unwrap() - o.fuller_average(1.0, 0.5).unwrap());
    assert!((b - split).abs() < 1e-6);
    // small windows approach raw sigma
    assert!((o.fuller_average(1e-4, 1.3).unwrap() - o.s(1.3).unwrap()).abs() < 1e-3);
}

#[test]
fn horizon_doubling_sharpens_the_direction() {
    let g = base_geodesic();
    let orbit = |half: f64| {
        let c = SampledCurve::sample(-half, half, 32 * half as usize + 1, |t| {
            offset(&g, t, 0.4 * t.cos())
        })
        .unwrap();
        OrbitShadow::new(c).unwrap().estimator_delta()
    };
    let (d6, d12, d24) = (orbit(6.0), orbit(12.0), orbit(24.0));
    assert!(d12 < d6 && d24 < d12 && d6 > 0.0, "{d6} {d12} {d24}");
}

#[test]
fn geodesic_orbit_displacement_rate() {
    let g = base_geodesic();
    let k = 0.4;
    let c = SampledCurve::sample(-50.0, 50.0, 1001, |t| g.point_at(k * t)).unwrap();
    let o = OrbitShadow::new(c).unwrap();
    let d = o.cesaro_dstar(1e-3).unwrap();
    assert!((d.estimate - k).abs() < 1e-3, "{d:?}");
    assert!(d.within_tolerance);
    assert!((o.displacement(-50.0, 30.0).unwrap() - k * 30.0).abs() < 1e-6);
    let report = orbit_report(&o, 0.25, &[0.25, 1.0], 1e-3, None).unwrap();
    assert!(report.min_sigma_bar_increment > 0.0);
    assert!((report.raw_min_increment - 0.25 * k).abs() < 1e-6);
}

#[test]
fn deck_translation_leaves_the_cocycle_unchanged() {
    let (group, _) = build_octagon_group().unwrap();
    let h = group.generators()[0];
    let c = wobbling_orbit(8.0, 16);
    let o = OrbitShadow::new(c.clone()).unwrap();
    let moved = OrbitShadow::new(c.transformed(&h).unwrap()).unwrap();
    for (t0, t) in [(-6.0, 1.5), (0.0, 3.0), (2.5, 0.25)] {
        assert!((o.cocycle_a(t0, t).unwrap() - moved.cocycle_a(t0, t).unwrap()).abs() < 1e-6);
        assert!((o.displacement(t0, t).unwrap() - moved.displacement(t0, t).unwrap()).abs() < 1e-8);
        let inc = |x: &OrbitShadow| x.fuller_average(1.0, t0 + t).unwrap() - x.fuller_average(1.0, t0).unwrap();
        assert!((inc(&o) - inc(&moved)).abs() < 1e-6);
    }
}

#[test]
fn el_orbit_projection_is_lipschitz() {
    let (group, domain) = build_octagon_group().unwrap();
    let spec = PotentialSpec {
        centers: vec![[0.1, 0.0]],
        depth: 0.05,
        bump_radius: 1.0,
        time_amplitude: 0.5,
        orbit_cutoff: 1.0 + domain.diameter(),
    };
    let l = MechanicalLagrangian::new(Arc::new(
        EquivariantPotential::new(Arc::new(group), &domain, spec).unwrap(),
    ));
    let control = StepControl {
        output_spacing: Some(0.05),
        ..StepControl::default()
    };
    let start = ELState::new(DiskPoint::new(0.05, 0.02).unwrap(), Complex64::new(1.0, 0.3), 0.0);
    let forward = integrate_el(&l, &start, 4.0, &control).unwrap();
    let backward = integrate_el(&l, &start, -4.0, &control).unwrap();
    let mut states = backward.states.clone();
    states.pop();
    states.extend(forward.states.iter().copied());
    let c = SampledCurve::new(
        states.iter().map(|s| s.time).collect(),
        states.iter().map(|s| s.position).collect(),
    )
    .unwrap();
    let k_max = 1.1 * states.iter().map(|s| s.velocity.norm()).fold(0.0, f64::max);
    let o = OrbitShadow::new(c).unwrap();
    let t = o.curve().times().to_vec();
    for w in t.windows(2) {
        let jump = (o.s(w[1]).unwrap() - o.s(w[0]).unwrap()).abs();
        assert!(jump < 2.0 * (w[1] - w[0]) * k_max);
    }
}
