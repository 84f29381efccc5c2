//! Fits and checks the `(λ, ε)` quasi-geodesic inequalities on sampled curves.

use hyperlag::geometry::{DiskPoint, Geodesic, SampledCurve};
use hyperlag::qg::{default_lambda_grid, qg_check, qg_fit};

fn main() -> hyperlag::Result<()> {
    let grid = default_lambda_grid(4.0);
    let g = Geodesic::through(&DiskPoint::new(-0.2, 0.1)?, &DiskPoint::new(0.3, 0.2)?)?;
    let line = SampledCurve::sample(-5.0, 5.0, 201, |t| g.point_at(t))?;
    let fit = qg_fit(&line, &grid, 1)?;
    println!("unit-speed geodesic: lambda = {}, epsilon = {:.2e}", fit.lambda, fit.epsilon);

    // a circle of radius 2 is not a quasi-geodesic over long times
    let omega = 1.0 / 2f64.sinh();
    let circle = SampledCurve::sample(0.0, 30.0, 301, |t| DiskPoint::from_polar(2.0, omega * t))?;
    let fit = qg_fit(&circle, &grid, 1)?;
    println!("circle arc: lambda = {}, epsilon = {:.4}, worst pair {:?}", fit.lambda, fit.epsilon, fit.worst_pair);
    println!("check at (1, 1): {}", qg_check(&circle, 1.0, 1.0, 1)?.ok);
    Ok(())
}
