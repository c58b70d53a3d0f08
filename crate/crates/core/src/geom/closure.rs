//! Chord and arc closures, and the chord/arc property checks used as
//! hypotheses of the sum and product rules.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::curve::{bisect_boundary, Curve};
use super::point::dot;
use super::primitive::{ArcSide, Primitive};
use super::region::Region;

/// Number of test points per boundary sample in the property checks.
pub const DEFAULT_PROPERTY_POINTS: usize = 16;

/// Parameter values in `[0, 1]` where `g` crosses zero along `c`.
fn param_roots(c: &Curve, g: impl Fn(Complex64) -> f64) -> Vec<f64> {
    let m = 256;
    let vals: Vec<f64> = (0..=m).map(|i| g(c.point(i as f64 / m as f64))).collect();
    let mut out = Vec::new();
    for i in 0..=m {
        if vals[i] == 0.0 {
            out.push(i as f64 / m as f64);
        }
        if i < m && vals[i] * vals[i + 1] < 0.0 {
            let pos_first = vals[i] > 0.0;
            let s = bisect_boundary(
                |s| (g(c.point(s)) > 0.0) == pos_first,
                i as f64 / m as f64,
                (i + 1) as f64 / m as f64,
            );
            out.push(s);
        }
    }
    out
}

fn in_arc_range(theta: f64, start: f64, sweep: f64) -> bool {
    let mut rel = (theta - start) % (2.0 * PI);
    if rel < 0.0 {
        rel += 2.0 * PI;
    }
    rel <= sweep + 1e-12 || rel >= 2.0 * PI - 1e-12
}

/// Points where the boundary curve meets the vertical line `Re z = x`.
fn vertical_crossings(c: &Curve, x: f64) -> Vec<Complex64> {
    match c {
        Curve::Segment { a, b } => {
            let tol = 1e-12 * (1.0 + x.abs());
            if (a.re - x).abs() <= tol && (b.re - x).abs() <= tol {
                vec![*a, *b]
            } else if (a.re - x) * (b.re - x) <= 0.0 && a.re != b.re {
                let t = (x - a.re) / (b.re - a.re);
                vec![a + (b - a) * t]
            } else {
                Vec::new()
            }
        }
        Curve::Arc { center, radius, start, sweep } => {
            if *radius == 0.0 {
                return if (center.re - x).abs() <= 1e-12 { vec![*center] } else { Vec::new() };
            }
            let cth = (x - center.re) / radius;
            if cth.abs() > 1.0 {
                return Vec::new();
            }
            let t = cth.acos();
            [t, -t]
                .iter()
                .filter(|&&th| in_arc_range(th, *start, *sweep))
                .map(|&th| center + Complex64::from_polar(*radius, th))
                .collect()
        }
        Curve::Param(_) => param_roots(c, |z| z.re - x).into_iter().map(|s| c.point(s)).collect(),
    }
}

/// Points where the boundary curve meets the circle `|z| = rho`.
fn circle_crossings(c: &Curve, rho: f64) -> Vec<Complex64> {
    let tol = 1e-12 * (1.0 + rho);
    match c {
        Curve::Segment { a, b } => {
            let e = b - a;
            let (qa, qb, qc) = (e.norm_sqr(), 2.0 * dot(*a, e), a.norm_sqr() - rho * rho);
            if qa == 0.0 {
                return if (a.norm() - rho).abs() <= tol { vec![*a] } else { Vec::new() };
            }
            let disc = qb * qb - 4.0 * qa * qc;
            if disc < 0.0 {
                return Vec::new();
            }
            let sq = disc.sqrt();
            [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)]
                .iter()
                .filter(|t| (-1e-12..=1.0 + 1e-12).contains(*t))
                .map(|&t| a + e * t.clamp(0.0, 1.0))
                .collect()
        }
        Curve::Arc { center, radius, start, sweep } => {
            let d = center.norm();
            if *radius == 0.0 || d == 0.0 {
                if (radius - rho).abs() <= tol && d == 0.0 {
                    return c.sample(3);
                }
                return if (center.norm() - rho).abs() <= tol && *radius == 0.0 {
                    vec![*center]
                } else {
                    Vec::new()
                };
            }
            // Angle at the arc centre between the direction to the origin and the crossing.
            let cosv = (d * d + radius * radius - rho * rho) / (2.0 * d * radius);
            if cosv.abs() > 1.0 + 1e-12 {
                return Vec::new();
            }
            let v = cosv.clamp(-1.0, 1.0).acos();
            let base = (-center).arg();
            [base + v, base - v]
                .iter()
                .filter(|&&th| in_arc_range(th, *start, *sweep))
                .map(|&th| center + Complex64::from_polar(*radius, th))
                .collect()
        }
        Curve::Param(_) => param_roots(c, |z| z.norm() - rho).into_iter().map(|s| c.point(s)).collect(),
    }
}

/// Largest `|Im z|` over the region on the line `Re z = x` (`-∞` if the line misses it).
pub(crate) fn chord_profile(region: &Region, x: f64) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for c in region.boundary_curves() {
        for p in vertical_crossings(&c, x) {
            best = best.max(p.im.abs());
        }
    }
    best
}

/// Extreme `|arg z|` over the region on the circle `|z| = rho`: the largest for
/// right arcs, the smallest for left arcs.
pub(crate) fn arc_profile(region: &Region, rho: f64, side: ArcSide) -> f64 {
    let on_axis = match side {
        ArcSide::Right => Complex64::new(-rho, 0.0),
        ArcSide::Left => Complex64::new(rho, 0.0),
    };
    if region.contains(on_axis) {
        return match side {
            ArcSide::Right => PI,
            ArcSide::Left => 0.0,
        };
    }
    let mut best = match side {
        ArcSide::Right => f64::NEG_INFINITY,
        ArcSide::Left => f64::INFINITY,
    };
    for c in region.boundary_curves() {
        for p in circle_crossings(&c, rho) {
            let a = p.arg().abs();
            best = match side {
                ArcSide::Right => best.max(a),
                ArcSide::Left => best.min(a),
            };
        }
    }
    best
}

pub(crate) fn chord_closure_boundary(region: &Region) -> Vec<Curve> {
    let Some((lo, hi)) = region.bbox() else {
        return region.boundary_curves();
    };
    let (x0, x1) = (lo.re, hi.re);
    let inner = region.clone();
    let upper = Curve::param(move |s| {
        let x = x0 + (x1 - x0) * s;
        Complex64::new(x, chord_profile(&inner, x).max(0.0))
    });
    let m0 = upper.start();
    let m1 = upper.end();
    vec![
        upper.clone(),
        upper.conj(),
        Curve::Segment { a: m0, b: m0.conj() },
        Curve::Segment { a: m1, b: m1.conj() },
    ]
}

pub(crate) fn arc_closure_boundary(region: &Region, side: ArcSide) -> Vec<Curve> {
    if !region.is_bounded() {
        return region.boundary_curves();
    }
    let r0 = region.point_distance(Complex64::new(0.0, 0.0));
    let r1 = region.max_modulus();
    let inner = region.clone();
    let theta = move |rho: f64| {
        let t = arc_profile(&inner, rho, side);
        if t.is_finite() {
            t
        } else {
            match side {
                ArcSide::Right => 0.0,
                ArcSide::Left => PI,
            }
        }
    };
    let th = theta.clone();
    let upper = Curve::param(move |s| {
        let rho = r0 + (r1 - r0) * s;
        Complex64::from_polar(rho, th(rho))
    });
    let mut out = vec![upper.clone(), upper.conj()];
    for rho in [r0, r1] {
        if rho <= 0.0 {
            continue;
        }
        let t = theta(rho);
        let o = Complex64::new(0.0, 0.0);
        out.push(match side {
            ArcSide::Right => Curve::Arc { center: o, radius: rho, start: -t, sweep: 2.0 * t },
            ArcSide::Left => Curve::Arc { center: o, radius: rho, start: t, sweep: 2.0 * (PI - t) },
        });
    }
    out
}

/// Adds the segment `[z, conj z]` for every point `z` of the region.
pub fn chord_closure(a: &Region) -> Region {
    Region::new(vec![Primitive::chord_closure(a.clone())], a.includes_infinity)
        .with_resolution(a.resolution)
}

/// Adds the origin-centred arc through the positive real axis between `z` and `conj z`.
pub fn right_arc_closure(a: &Region) -> Region {
    Region::new(vec![Primitive::arc_closure(a.clone(), ArcSide::Right)], a.includes_infinity)
        .with_resolution(a.resolution)
}

/// Adds the origin-centred arc through the negative real axis between `z` and `conj z`.
pub fn left_arc_closure(a: &Region) -> Region {
    Region::new(vec![Primitive::arc_closure(a.clone(), ArcSide::Left)], a.includes_infinity)
        .with_resolution(a.resolution)
}

/// Membership up to the slack left by boundary crossings found by bisection.
fn near(a: &Region, w: Complex64, scale: f64) -> bool {
    a.contains(w) || a.point_distance(w) <= 1e-9 * (1.0 + scale)
}

/// Tests `k` points of `[z, conj z]` for every boundary sample `z`.
pub fn has_chord_property(a: &Region, k: usize) -> bool {
    let k = k.max(2);
    a.boundary_samples().iter().all(|z| {
        (0..k).all(|i| {
            let t = 1.0 - 2.0 * i as f64 / (k - 1) as f64;
            near(a, Complex64::new(z.re, z.im * t), z.norm())
        })
    })
}

/// Tests `k` points of the origin-centred arc from each boundary sample towards
/// the positive (right) or negative (left) real axis.
pub fn has_arc_property(a: &Region, side: ArcSide, k: usize) -> bool {
    let k = k.max(2);
    a.boundary_samples().iter().all(|z| {
        let (r, th) = (z.norm(), z.arg());
        let target = match side {
            ArcSide::Right => 0.0,
            ArcSide::Left => {
                if th >= 0.0 {
                    PI
                } else {
                    -PI
                }
            }
        };
        (0..k).all(|i| {
            let t = th + (target - th) * i as f64 / (k - 1) as f64;
            near(a, Complex64::from_polar(r, t), r)
        })
    })
}
