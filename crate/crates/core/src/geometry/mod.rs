//! Poincaré-disk geometry with the conformal factor `2 / (1 - |z|^2)` (curvature -1).
//!
//! All types are immutable values; operations that would produce a point too
//! close to the circle at infinity return [`Error::BoundaryOverflow`](crate::Error)
//! instead of clamping.

mod curve;
mod geodesic;
mod isometry;
mod point;

pub use curve::{SampledCurve, HAUSDORFF_SCAN_SPACING};
pub(crate) use curve::uniform_times;
pub use geodesic::Geodesic;
pub use isometry::Isometry;
pub use point::{
    dist, exp_map, geodesic_interpolate, log_map, BoundaryPoint, DiskPoint, TangentVec,
    BOUNDARY_MARGIN,
};
