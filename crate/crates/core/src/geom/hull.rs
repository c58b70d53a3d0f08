//! h-convex hulls of upper half-plane point sets, computed as Euclidean convex
//! hulls in Beltrami–Klein coordinates and pulled back to `arc_min` edges.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::curve::Curve;
use super::hyperbolic::{arc_min, bk_map_unchecked};
use super::point::{cross, dot, fold_upper};
use crate::error::{Result, SrgError};

/// Relative tolerance below which three Klein points count as collinear.
const COLLINEAR_EPS: f64 = 1e-10;

/// Membership band around the hull boundary, relative to `max(1, |z|)`.
const BOUNDARY_BAND: f64 = 1e-9;

/// Conjugate-mirrored h-convex hull of a finite point set.
///
/// With `filled` set, bounded holes enclosed between the hull and its mirror
/// image are part of the set, which makes it simply connected.
#[derive(Clone, Debug)]
pub struct Hull {
    /// Hull vertices in the upper half-plane, counter-clockwise in Klein coordinates.
    samples: Vec<Complex64>,
    filled: bool,
    klein: Vec<Complex64>,
    /// Sorted Klein angles in `[0, 2π)` of vertices on the real axis.
    ideal_angles: Vec<f64>,
    boundary: Vec<Curve>,
    /// Enclosing disc of each upper boundary arc.
    arc_discs: Vec<(Complex64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct HullRepr {
    samples: Vec<Complex64>,
    filled: bool,
}

impl Serialize for Hull {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HullRepr { samples: self.samples.clone(), filled: self.filled }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Hull {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = HullRepr::deserialize(d)?;
        Hull::new(&repr.samples, repr.filled).map_err(serde::de::Error::custom)
    }
}

fn is_ideal(z: Complex64) -> bool {
    z.im.abs() <= 1e-14 * z.norm().max(1.0)
}

impl Hull {
    pub fn new(points: &[Complex64], filled: bool) -> Result<Self> {
        if points.is_empty() {
            return Err(SrgError::Empty("h-convex hull of no points".into()));
        }
        if points.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(SrgError::Domain("h-convex hull needs finite points".into()));
        }
        let pts: Vec<Complex64> = points
            .iter()
            .map(|&z| {
                let z = fold_upper(z);
                if is_ideal(z) {
                    Complex64::new(z.re, 0.0)
                } else {
                    z
                }
            })
            .collect();
        let kl: Vec<Complex64> = pts
            .iter()
            .map(|&z| {
                let w = bk_map_unchecked(z);
                if w.norm() > 1.0 {
                    w / w.norm()
                } else {
                    w
                }
            })
            .collect();
        let order = monotone_chain(&kl);
        let samples: Vec<Complex64> = order.iter().map(|&i| pts[i]).collect();
        let klein: Vec<Complex64> = order.iter().map(|&i| kl[i]).collect();
        let mut ideal_angles: Vec<f64> = samples
            .iter()
            .zip(&klein)
            .filter(|(z, _)| z.im == 0.0)
            .map(|(_, w)| {
                let a = w.im.atan2(w.re);
                if a < 0.0 {
                    a + 2.0 * PI
                } else {
                    a
                }
            })
            .collect();
        ideal_angles.sort_by(f64::total_cmp);
        let mut hull = Hull { samples, filled, klein, ideal_angles, boundary: Vec::new(), arc_discs: Vec::new() };
        hull.boundary = hull.build_boundary();
        let half = (hull.boundary.len() / 2).max(1).min(hull.boundary.len());
        hull.arc_discs = hull.boundary[..half]
            .iter()
            .map(|c| {
                let (a, b) = (c.start(), c.end());
                let m = (a + b) / 2.0;
                let r = [a, b, c.point(0.5)].iter().map(|p| (p - m).norm()).fold(0.0, f64::max);
                (m, r * (1.0 + 1e-9))
            })
            .collect();
        Ok(hull)
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn filled(&self) -> bool {
        self.filled
    }

    pub fn with_filled(&self, filled: bool) -> Hull {
        Hull::new(&self.samples, filled).expect("existing hull samples are valid")
    }

    /// Boundary arcs, upper half first, followed by their mirror images.
    pub fn boundary(&self) -> &[Curve] {
        &self.boundary
    }

    fn edge_count(&self) -> usize {
        match self.klein.len() {
            1 => 0,
            n => n,
        }
    }

    fn edge(&self, i: usize) -> (usize, usize) {
        (i, (i + 1) % self.klein.len())
    }

    fn build_boundary(&self) -> Vec<Curve> {
        let n = self.klein.len();
        let mut upper = Vec::new();
        if n == 1 {
            upper.push(Curve::point_curve(self.samples[0]));
        }
        for i in 0..self.edge_count() {
            let (a, b) = self.edge(i);
            if self.filled && self.edge_is_hole(a, b) {
                continue;
            }
            if n == 2 && i == 1 && !upper.is_empty() && !self.filled {
                // Both sides of a degenerate hull trace the same geodesic.
                continue;
            }
            upper.push(arc_min(self.samples[a], self.samples[b]));
        }
        let lower: Vec<Curve> = upper.iter().map(Curve::conj).collect();
        upper.extend(lower);
        upper
    }

    /// Whether the pocket outside the directed Klein edge `a → b` is a bounded hole.
    fn edge_is_hole(&self, a: usize, b: usize) -> bool {
        let (wa, wb) = (self.klein[a], self.klein[b]);
        let d = wb - wa;
        if d.norm() == 0.0 {
            return false;
        }
        let mid = 0.5 * (wa + wb);
        let outward = Complex64::new(d.im, -d.re) / d.norm();
        self.pocket_is_hole(mid, outward)
    }

    fn pocket_is_hole(&self, p: Complex64, dir: Complex64) -> bool {
        if self.ideal_angles.len() < 2 {
            return false;
        }
        let pd = dot(p, dir);
        let t = -pd + (pd * pd - (p.norm_sqr() - 1.0)).max(0.0).sqrt();
        let q = p + dir * t;
        let mut theta = q.im.atan2(q.re);
        if theta < 0.0 {
            theta += 2.0 * PI;
        }
        let lo = self.ideal_angles[0];
        let hi = *self.ideal_angles.last().unwrap();
        theta >= lo && theta <= hi
    }

    fn inside_klein_polygon(&self, w: Complex64) -> bool {
        let n = self.klein.len();
        if n < 3 {
            return false;
        }
        (0..n).all(|i| {
            let (a, b) = (self.klein[i], self.klein[(i + 1) % n]);
            let e = b - a;
            cross(e, w - a) >= -1e-14 * e.norm()
        })
    }

    fn nearest_on_polygon(&self, w: Complex64) -> Complex64 {
        let n = self.klein.len();
        if n == 1 {
            return self.klein[0];
        }
        let mut best = (f64::INFINITY, self.klein[0]);
        for i in 0..n {
            let (a, b) = (self.klein[i], self.klein[(i + 1) % n]);
            let e = b - a;
            let s = if e.norm_sqr() > 0.0 {
                (dot(w - a, e) / e.norm_sqr()).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let p = a + e * s;
            let d = (w - p).norm();
            if d < best.0 {
                best = (d, p);
            }
        }
        best.1
    }

    pub fn contains(&self, z: Complex64) -> bool {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return false;
        }
        let zu = fold_upper(z);
        let w = bk_map_unchecked(zu);
        if self.inside_klein_polygon(w) {
            return true;
        }
        if self.filled {
            let p = self.nearest_on_polygon(w);
            let d = w - p;
            if d.norm() > 0.0 && self.pocket_is_hole(p, d / d.norm()) {
                return true;
            }
        }
        let band = BOUNDARY_BAND * zu.norm().max(1.0);
        self.boundary
            .iter()
            .zip(&self.arc_discs)
            .any(|(c, (m, r))| (zu - m).norm() - r <= band && c.distance_to(zu).0 <= band)
    }

    pub fn point_distance(&self, z: Complex64) -> f64 {
        if self.contains(z) {
            return 0.0;
        }
        let zu = fold_upper(z);
        let half = (self.boundary.len() / 2).max(1);
        self.boundary[..half]
            .iter()
            .map(|c| c.distance_to(zu).0)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn support(&self, n: Complex64) -> f64 {
        self.boundary
            .iter()
            .map(|c| c.support(n))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Hull of the images of the vertices under `f`; exact when `f` is an
    /// isometry of the hyperbolic half-plane.
    pub fn map_samples(&self, f: impl Fn(Complex64) -> Complex64) -> Result<Hull> {
        let pts: Vec<Complex64> = self.samples.iter().map(|&z| f(z)).collect();
        Hull::new(&pts, self.filled)
    }
}

/// Andrew's monotone chain; returns indices of the hull vertices in
/// counter-clockwise order with near-collinear points removed.
fn monotone_chain(pts: &[Complex64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| {
        pts[a]
            .re
            .total_cmp(&pts[b].re)
            .then(pts[a].im.total_cmp(&pts[b].im))
    });
    idx.dedup_by(|a, b| pts[*a] == pts[*b]);
    if idx.len() <= 2 {
        return idx;
    }
    let turn = |o: usize, a: usize, b: usize| {
        let (u, v) = (pts[a] - pts[o], pts[b] - pts[o]);
        cross(u, v) > COLLINEAR_EPS * u.norm() * v.norm()
    };
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2 && !turn(lower[lower.len() - 2], lower[lower.len() - 1], i) {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && !turn(upper[upper.len() - 2], upper[upper.len() - 1], i) {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    lower
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn circle_samples(n: usize) -> Vec<Complex64> {
        (0..=n)
            .map(|i| c(0.5, 0.0) + Complex64::from_polar(0.5, PI * i as f64 / n as f64))
            .collect()
    }

    #[test]
    fn single_point_hull() {
        let h = Hull::new(&[c(1.0, 1.0)], true).unwrap();
        assert!(h.contains(c(1.0, 1.0)));
        assert!(h.contains(c(1.0, -1.0)));
        assert!(!h.contains(c(1.0, 0.5)));
        assert!(Hull::new(&[], true).is_err());
    }

    #[test]
    fn two_point_hull_is_geodesic() {
        let h = Hull::new(&[c(1.0, 0.0), c(0.0, 1.0)], false).unwrap();
        let mid = Complex64::from_polar(1.0, PI / 4.0);
        assert!(h.contains(mid));
        assert!(h.contains(mid.conj()));
        assert!(!h.contains(c(0.5, 0.5)));
    }

    #[test]
    fn filled_circle_is_disc() {
        let h = Hull::new(&circle_samples(256), true).unwrap();
        assert!(h.contains(c(0.5, 0.0)));
        assert!(h.contains(c(0.3, 0.2)));
        assert!(!h.contains(c(1.1, 0.0)));
        assert!(!h.contains(c(-0.05, 0.0)));
        assert!((h.support(c(1.0, 0.0)) - 1.0).abs() < 1e-12);
        assert!((h.support(c(0.0, 1.0)) - 0.5).abs() < 1e-12);
        assert!((h.point_distance(c(-1.0, 0.0)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unfilled_circle_has_hole() {
        let h = Hull::new(&circle_samples(256), false).unwrap();
        assert!(!h.contains(c(0.5, 0.0)));
        assert!(h.contains(c(0.5, 0.5)));
        assert!(h.contains(c(0.5, -0.5)));
    }

    #[test]
    fn triangle_hull_contains_interior() {
        let pts = [c(0.0, 1.0), c(2.0, 1.0), c(1.0, 3.0), c(1.0, 1.5)];
        let h = Hull::new(&pts, true).unwrap();
        assert_eq!(h.samples().len(), 3);
        assert!(h.contains(c(1.0, 1.5)));
        assert!(h.contains(c(1.0, -2.0)));
        assert!(!h.contains(c(3.0, 1.0)));
    }

    #[test]
    fn inversion_is_hull_isometry() {
        let pts = [c(1.0, 1.0), c(2.0, 0.5), c(1.5, 2.0)];
        let h = Hull::new(&pts, true).unwrap();
        let inv = h.map_samples(super::super::point::invert).unwrap();
        for s in [0.1, 0.5, 0.9] {
            let z = h.boundary()[0].point(s);
            assert!(inv.contains(super::super::point::invert(z)));
        }
    }
}
