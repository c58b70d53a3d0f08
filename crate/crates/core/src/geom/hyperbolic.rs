//! Beltrami–Klein coordinates for the upper half-plane and the geodesic arcs
//! (`arc_min`) that bound h-convex sets.

use num_complex::Complex64;

use super::curve::Curve;
use crate::error::{Result, SrgError};

const J: Complex64 = Complex64::new(0.0, 1.0);

/// Arcs whose radius exceeds this multiple of the chord length are drawn as
/// straight segments.
const FLAT_ARC_RATIO: f64 = 1e7;

/// Cayley map `g(z) = (z - j)/(z + j)`, upper half-plane onto the unit disc.
#[inline]
pub(crate) fn cayley(z: Complex64) -> Complex64 {
    (z - J) / (z + J)
}

/// Klein image of a closed upper half-plane point, without the domain check.
#[inline]
pub(crate) fn bk_map_unchecked(z: Complex64) -> Complex64 {
    let g = cayley(z);
    if z.im == 0.0 {
        // Real points sit exactly on the unit circle.
        return g / g.norm();
    }
    g * (2.0 / (1.0 + g.norm_sqr()))
}

/// Inverse Klein map; returns a non-finite value for `w = 1`.
#[inline]
pub(crate) fn bk_unmap_unchecked(w: Complex64) -> Complex64 {
    let s = (1.0 - w.norm_sqr()).max(0.0).sqrt();
    let p = w / (1.0 + s);
    let z = J * (1.0 + p) / (1.0 - p);
    Complex64::new(z.re, z.im.max(0.0))
}

/// Beltrami–Klein map `f ∘ g` with `f(z) = 2z/(1+|z|²)`: the closed upper
/// half-plane onto the closed unit disc, geodesics onto chords.
pub fn bk_map(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) || z.im < 0.0 {
        return Err(SrgError::Domain(format!(
            "bk_map needs a finite point with Im >= 0, got {z}"
        )));
    }
    Ok(bk_map_unchecked(z))
}

/// Two-sided inverse of [`bk_map`] on the closed unit disc minus the image of ∞.
pub fn bk_unmap(w: Complex64) -> Result<Complex64> {
    if !(w.norm_sqr() <= 1.0 + 1e-12) {
        return Err(SrgError::Domain(format!("bk_unmap needs |w| <= 1, got {w}")));
    }
    let z = bk_unmap_unchecked(w);
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(SrgError::Domain("w = 1 is the image of the point at infinity".into()));
    }
    Ok(z)
}

/// Geodesic between two closed upper half-plane points: the arc of the circle
/// through both with centre on the real axis, or the vertical segment when the
/// real parts agree.
pub fn arc_min(z1: Complex64, z2: Complex64) -> Curve {
    if z1 == z2 {
        return Curve::point_curve(z1);
    }
    let scale = z1.norm().max(z2.norm()).max(1.0);
    let dx = z1.re - z2.re;
    if dx.abs() <= 1e-14 * scale {
        return Curve::Segment { a: z1, b: z2 };
    }
    let c = (z1.norm_sqr() - z2.norm_sqr()) / (2.0 * dx);
    let center = Complex64::new(c, 0.0);
    let radius = 0.5 * ((z1 - center).norm() + (z2 - center).norm());
    if radius > FLAT_ARC_RATIO * (z1 - z2).norm() {
        return Curve::Segment { a: z1, b: z2 };
    }
    let angle = |z: Complex64| {
        let d = z - center;
        if d.im <= 0.0 {
            if d.re >= 0.0 {
                0.0
            } else {
                std::f64::consts::PI
            }
        } else {
            d.im.atan2(d.re)
        }
    };
    let (t1, t2) = (angle(z1), angle(z2));
    Curve::Arc {
        center,
        radius,
        start: t1.min(t2),
        sweep: (t1 - t2).abs(),
    }
}
