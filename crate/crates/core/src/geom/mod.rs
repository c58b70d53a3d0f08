//! Complex-plane and hyperbolic geometry kernel.

pub mod algebra;
pub mod closure;
pub mod curve;
pub mod distance;
pub mod hull;
pub mod hyperbolic;
pub mod point;
pub mod primitive;
pub mod region;

pub use algebra::{
    minkowski_sum, minkowski_sum_flagged, region_crop, region_invert, region_product, region_product_flagged,
    region_scale, region_shift, region_union,
};
pub use closure::{
    chord_closure, has_arc_property, has_chord_property, left_arc_closure, right_arc_closure,
};
pub use curve::Curve;
pub use distance::{region_distance, region_distance_report, DistanceReport};
pub use hull::Hull;
pub use hyperbolic::{arc_min, bk_map, bk_unmap};
pub use point::{mobius_invert, ExtPoint};
pub use primitive::{ArcSide, Primitive};
pub use region::{default_resolution, Region};

use crate::error::{Result, SrgError};
use num_complex::Complex64;

/// Filled h-convex hull of upper half-plane points, mirrored into the lower half.
pub fn h_convex_hull(points: &[Complex64]) -> Result<Region> {
    check_upper(points)?;
    Region::hull(points, true)
}

fn check_upper(points: &[Complex64]) -> Result<()> {
    if let Some(z) = points.iter().find(|z| z.im < 0.0 || !z.re.is_finite() || !z.im.is_finite()) {
        return Err(SrgError::Domain(format!("hull points must be finite with Im >= 0, got {z}")));
    }
    Ok(())
}

/// Exact h-convex hull without hole filling.
pub fn h_convex_hull_exact(points: &[Complex64]) -> Result<Region> {
    check_upper(points)?;
    Region::hull(points, false)
}
