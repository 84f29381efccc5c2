//! Distances, geodesics, projections and the exp/log pair in the Poincaré disk.

use hyperlag::geometry::{dist, exp_map, log_map, DiskPoint, Geodesic, Isometry};

fn main() -> hyperlag::Result<()> {
    let p = DiskPoint::new(-0.3, 0.2)?;
    let q = DiskPoint::new(0.6, -0.1)?;
    println!("d(p, q) = {:.12}", dist(&p, &q));

    let g = Geodesic::through(&p, &q)?;
    println!(
        "geodesic through p, q: endpoints at angles {:.6} and {:.6}",
        g.xi_minus().theta(),
        g.xi_plus().theta()
    );

    let x = DiskPoint::new(0.1, 0.5)?;
    let (foot, s) = g.project(&x)?;
    println!("projection of x: ({:.6}, {:.6}) at arclength {s:.6}, distance {:.6}", foot.x(), foot.y(), dist(&x, &foot));

    let w = log_map(&p, &q);
    let back = exp_map(&w, 1.0)?;
    println!("exp(log(p, q)) misses q by {:.2e}", dist(&back, &q));

    let h = Isometry::translation_along(0.7, 2.0).compose(&Isometry::rotation(1.1));
    let moved = dist(&h.apply(&p)?, &h.apply(&q)?);
    println!("after an isometry the distance changes by {:.2e}", (moved - dist(&p, &q)).abs());
    Ok(())
}
