//! Analytic building blocks of regions and their exact membership, support
//! and distance computations.

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::closure;
use super::curve::{bisect_boundary, Curve};
use super::hull::Hull;
use super::point::{cross, dot, invert, wrap_angle};
use super::region::Region;

/// Half-width of the window used to crop unbounded boundaries.
pub const CROP_RADIUS: f64 = 1e6;

/// Relative slack applied to exact membership tests.
pub(crate) const MEMBER_EPS: f64 = 1e-12;

/// Lazily computed boundary of a derived primitive.
#[derive(Clone, Default)]
pub struct BoundaryCache(Arc<OnceLock<Vec<Curve>>>);

impl fmt::Debug for BoundaryCache {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("BoundaryCache")
    }
}

impl BoundaryCache {
    fn get_or_init(&self, f: impl FnOnce() -> Vec<Curve>) -> &[Curve] {
        self.0.get_or_init(f)
    }
}

/// Which origin-centred arc between `z` and `conj z` an arc closure adds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcSide {
    /// Through the positive real axis.
    Right,
    /// Through the negative real axis.
    Left,
}

mod inf_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// One analytic piece of a region. The first four kinds are the basic
/// shapes; the remaining ones record exact set operations on regions.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Primitive {
    Disc {
        center: Complex64,
        radius: f64,
    },
    /// `{z : Re(z e^{-j angle}) >= offset}`.
    HalfPlane {
        angle: f64,
        offset: f64,
    },
    /// `{r e^{±jθ} : rmin <= r <= rmax, |θ| <= phimax}`.
    AnnularSector {
        rmin: f64,
        #[serde(with = "inf_as_null")]
        rmax: f64,
        phimax: f64,
    },
    HulledCurve(Hull),
    /// Boundary circle only.
    Circle {
        center: Complex64,
        radius: f64,
    },
    /// Region bounded by `Πγ (cos(φ/n))^n e^{-jφ}`.
    Cascade {
        gammas: Vec<f64>,
    },
    /// Convex polygon (counter-clockwise vertices) grown by `dilation`.
    Polygon {
        vertices: Vec<Complex64>,
        dilation: f64,
    },
    Intersection {
        parts: Vec<Primitive>,
        #[serde(skip)]
        cache: BoundaryCache,
    },
    /// Image of a region under `z ↦ 1/conj(z)`.
    Inverted {
        region: Box<Region>,
        #[serde(skip)]
        cache: BoundaryCache,
    },
    /// `{scale·z + shift : z ∈ region}` with real `scale ≠ 0` and `shift`.
    Affine {
        scale: f64,
        shift: f64,
        region: Box<Region>,
    },
    /// Points within `radius` of a region.
    Dilated {
        region: Box<Region>,
        radius: f64,
        #[serde(skip)]
        cache: BoundaryCache,
    },
    ChordClosure {
        region: Box<Region>,
        #[serde(skip)]
        cache: BoundaryCache,
    },
    ArcClosure {
        region: Box<Region>,
        side: ArcSide,
        #[serde(skip)]
        cache: BoundaryCache,
    },
}

fn rel_tol(scale: f64) -> f64 {
    MEMBER_EPS * (1.0 + scale)
}

/// Distance from `z` to the nearest of `curves`.
pub(crate) fn curves_distance(curves: &[Curve], z: Complex64) -> f64 {
    curves
        .iter()
        .map(|c| c.distance_to(z).0)
        .fold(f64::INFINITY, f64::min)
}

fn curves_support(curves: &[Curve], n: Complex64) -> f64 {
    curves
        .iter()
        .map(|c| c.support(n))
        .filter(|v| !v.is_nan())
        .fold(f64::NEG_INFINITY, f64::max)
}

fn cascade_point(p: f64, n: usize, phi: f64) -> Complex64 {
    Complex64::from_polar(p * (phi / n as f64).cos().powi(n as i32), -phi)
}

impl Primitive {
    pub fn disc(center: f64, radius: f64) -> Self {
        Primitive::Disc { center: Complex64::new(center, 0.0), radius }
    }

    pub fn half_plane(angle: f64, offset: f64) -> Self {
        Primitive::HalfPlane { angle, offset }
    }

    pub fn intersection(parts: Vec<Primitive>) -> Self {
        Primitive::Intersection { parts, cache: BoundaryCache::default() }
    }

    pub fn inverted(region: Region) -> Self {
        Primitive::Inverted { region: Box::new(region), cache: BoundaryCache::default() }
    }

    pub fn affine(scale: f64, shift: f64, region: Region) -> Self {
        Primitive::Affine { scale, shift, region: Box::new(region) }
    }

    pub fn dilated(region: Region, radius: f64) -> Self {
        Primitive::Dilated { region: Box::new(region), radius, cache: BoundaryCache::default() }
    }

    pub fn chord_closure(region: Region) -> Self {
        Primitive::ChordClosure { region: Box::new(region), cache: BoundaryCache::default() }
    }

    pub fn arc_closure(region: Region, side: ArcSide) -> Self {
        Primitive::ArcClosure { region: Box::new(region), side, cache: BoundaryCache::default() }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Primitive::Disc { .. } => "disc",
            Primitive::HalfPlane { .. } => "half_plane",
            Primitive::AnnularSector { .. } => "annular_sector",
            Primitive::HulledCurve(_) => "hulled_curve",
            Primitive::Circle { .. } => "circle",
            Primitive::Cascade { .. } => "cascade",
            Primitive::Polygon { .. } => "polygon",
            Primitive::Intersection { .. } => "intersection",
            Primitive::Inverted { .. } => "inverted",
            Primitive::Affine { .. } => "affine",
            Primitive::Dilated { .. } => "dilated",
            Primitive::ChordClosure { .. } => "chord_closure",
            Primitive::ArcClosure { .. } => "arc_closure",
        }
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            Primitive::HalfPlane { .. } => false,
            Primitive::AnnularSector { rmax, .. } => rmax.is_finite(),
            Primitive::Intersection { parts, .. } => parts.iter().any(|p| p.is_bounded()),
            Primitive::Inverted { region, .. } => region.point_distance(Complex64::new(0.0, 0.0)) > 0.0,
            Primitive::Affine { region, .. }
            | Primitive::Dilated { region, .. }
            | Primitive::ChordClosure { region, .. }
            | Primitive::ArcClosure { region, .. } => region.is_bounded(),
            _ => true,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return false;
        }
        match self {
            Primitive::Disc { center, radius } => {
                (z - center).norm() <= radius + rel_tol(radius + center.norm())
            }
            Primitive::HalfPlane { angle, offset } => {
                let v = dot(z, Complex64::from_polar(1.0, *angle));
                v >= offset - rel_tol(offset.abs() + z.norm())
            }
            Primitive::AnnularSector { rmin, rmax, phimax } => {
                let r = z.norm();
                let ok_r = r >= rmin - rel_tol(*rmin) && (r <= rmax + rel_tol(*rmax));
                ok_r && (r == 0.0 || z.arg().abs() <= phimax + MEMBER_EPS)
            }
            Primitive::HulledCurve(h) => h.contains(z),
            Primitive::Circle { center, radius } => {
                ((z - center).norm() - radius).abs() <= rel_tol(radius + center.norm())
            }
            Primitive::Cascade { gammas } => {
                let p: f64 = gammas.iter().product();
                let n = gammas.len();
                let r = z.norm();
                if r == 0.0 {
                    return true;
                }
                let psi = z.arg();
                let lim = p * (psi / n as f64).cos().max(0.0).powi(n as i32);
                r <= lim + rel_tol(p)
            }
            Primitive::Polygon { vertices, dilation } => {
                polygon_distance(vertices, z) <= dilation + rel_tol(dilation + z.norm())
            }
            Primitive::Intersection { parts, .. } => parts.iter().all(|p| p.contains(z)),
            Primitive::Inverted { region, .. } => {
                if z.norm() == 0.0 {
                    region.includes_infinity || !region.is_bounded()
                } else {
                    region.contains(invert(z))
                }
            }
            Primitive::Affine { scale, shift, region } => region.contains((z - shift) / scale),
            Primitive::Dilated { region, radius, .. } => {
                region.point_distance(z) <= radius + rel_tol(radius + z.norm())
            }
            Primitive::ChordClosure { region, .. } => {
                region.contains(z) || closure::chord_profile(region, z.re) >= z.im.abs() - rel_tol(z.norm())
            }
            Primitive::ArcClosure { region, side, .. } => {
                if region.contains(z) {
                    return true;
                }
                let r = z.norm();
                let a = z.arg().abs();
                match side {
                    ArcSide::Right => closure::arc_profile(region, r, *side) >= a - MEMBER_EPS,
                    ArcSide::Left => closure::arc_profile(region, r, *side) <= a + MEMBER_EPS,
                }
            }
        }
    }

    /// Boundary curves; unbounded edges are cropped to `|z| <= window`.
    pub fn boundary(&self, window: f64) -> Vec<Curve> {
        match self {
            Primitive::Disc { center, radius } | Primitive::Circle { center, radius } => {
                if *radius == 0.0 {
                    vec![Curve::point_curve(*center)]
                } else {
                    vec![Curve::circle(*center, *radius)]
                }
            }
            Primitive::HalfPlane { angle, offset } => {
                let nrm = Complex64::from_polar(1.0, *angle);
                let base = nrm * offset;
                let t = Complex64::new(0.0, 1.0) * nrm;
                let half = (window * window - offset * offset).max(0.0).sqrt().max(1.0);
                vec![Curve::Segment { a: base - t * half, b: base + t * half }]
            }
            Primitive::AnnularSector { rmin, rmax, phimax } => sector_boundary(*rmin, *rmax, *phimax, window),
            Primitive::HulledCurve(h) => h.boundary().to_vec(),
            Primitive::Cascade { gammas } => {
                let p: f64 = gammas.iter().product();
                let n = gammas.len();
                let span = if n == 1 { PI / 2.0 } else { PI };
                vec![Curve::param(move |s| cascade_point(p, n, -span + 2.0 * span * s))]
            }
            Primitive::Polygon { vertices, dilation } => polygon_boundary(vertices, *dilation),
            Primitive::Intersection { parts, cache } => {
                cache.get_or_init(|| intersection_boundary(parts)).to_vec()
            }
            Primitive::Inverted { region, cache } => cache
                .get_or_init(|| {
                    region
                        .boundary_curves()
                        .iter()
                        .map(|c| c.map(invert))
                        .collect()
                })
                .to_vec(),
            Primitive::Affine { scale, shift, region } => region
                .boundary_curves()
                .iter()
                .map(|c| c.affine(*scale, Complex64::new(*shift, 0.0)))
                .collect(),
            Primitive::Dilated { region, radius, cache } => cache
                .get_or_init(|| dilated_boundary(&region.boundary_curves(), *radius))
                .to_vec(),
            Primitive::ChordClosure { region, cache } => {
                cache.get_or_init(|| closure::chord_closure_boundary(region)).to_vec()
            }
            Primitive::ArcClosure { region, side, cache } => {
                cache.get_or_init(|| closure::arc_closure_boundary(region, *side)).to_vec()
            }
        }
    }

    /// Euclidean distance from `z` to the primitive (0 inside).
    pub fn point_distance(&self, z: Complex64) -> f64 {
        match self {
            Primitive::Disc { center, radius } => ((z - center).norm() - radius).max(0.0),
            Primitive::HalfPlane { angle, offset } => {
                (offset - dot(z, Complex64::from_polar(1.0, *angle))).max(0.0)
            }
            Primitive::Circle { center, radius } => ((z - center).norm() - radius).abs(),
            Primitive::HulledCurve(h) => h.point_distance(z),
            Primitive::Polygon { vertices, dilation } => (polygon_distance(vertices, z) - dilation).max(0.0),
            Primitive::Affine { scale, shift, region } => {
                scale.abs() * region.point_distance((z - shift) / scale)
            }
            Primitive::Dilated { region, radius, .. } => (region.point_distance(z) - radius).max(0.0),
            _ => {
                if self.contains(z) {
                    0.0
                } else {
                    curves_distance(&self.boundary(window_for(z)), z)
                }
            }
        }
    }

    /// Signed distance to the boundary: positive inside, negative outside.
    pub fn signed_distance(&self, z: Complex64) -> f64 {
        match self {
            Primitive::Disc { center, radius } => radius - (z - center).norm(),
            Primitive::HalfPlane { angle, offset } => dot(z, Complex64::from_polar(1.0, *angle)) - offset,
            Primitive::Circle { center, radius } => -((z - center).norm() - radius).abs(),
            _ => {
                if self.contains(z) {
                    curves_distance(&self.boundary(window_for(z)), z)
                } else {
                    -self.point_distance(z)
                }
            }
        }
    }

    /// Support function `sup ⟨z, n⟩`; `+∞` when unbounded in direction `n`.
    pub fn support(&self, n: Complex64) -> f64 {
        match self {
            Primitive::Disc { center, radius } | Primitive::Circle { center, radius } => {
                dot(*center, n) + radius * n.norm()
            }
            Primitive::HalfPlane { angle, offset } => {
                let nrm = Complex64::from_polar(1.0, *angle);
                if n.norm() == 0.0 {
                    0.0
                } else if (n / n.norm() + nrm).norm() < 1e-12 {
                    -n.norm() * offset
                } else {
                    f64::INFINITY
                }
            }
            Primitive::AnnularSector { rmin, rmax, phimax } => {
                if !rmax.is_finite() && n.norm() > 0.0 {
                    let gap = wrap_angle(n.arg()).abs() - phimax;
                    if gap < PI / 2.0 {
                        return f64::INFINITY;
                    }
                }
                curves_support(&sector_boundary(*rmin, *rmax, *phimax, CROP_RADIUS), n).max(
                    if *rmin == 0.0 { 0.0 } else { f64::NEG_INFINITY },
                )
            }
            Primitive::HulledCurve(h) => h.support(n),
            Primitive::Polygon { vertices, dilation } => {
                vertices.iter().map(|v| dot(*v, n)).fold(f64::NEG_INFINITY, f64::max) + dilation * n.norm()
            }
            Primitive::Affine { scale, shift, region } => shift * n.re + region.support(n * *scale),
            Primitive::Dilated { region, radius, .. } => region.support(n) + radius * n.norm(),
            Primitive::ChordClosure { region, .. } => region.support(n).max(region.support(n.conj())),
            Primitive::Inverted { region, .. } => inverted_support(region, n),
            Primitive::Intersection { .. } if !self.is_bounded() => {
                let curves = self.boundary(CROP_RADIUS);
                let mut best = (f64::NEG_INFINITY, 0.0);
                for c in &curves {
                    let (v, _, p) = c.minimize(|z| -dot(z, n), 257);
                    if -v > best.0 {
                        best = (-v, p.norm());
                    }
                }
                if best.1 > 0.5 * CROP_RADIUS {
                    f64::INFINITY
                } else {
                    best.0
                }
            }
            _ => curves_support(&self.boundary(CROP_RADIUS), n),
        }
    }

    /// Axis-aligned bounding box `(lower-left, upper-right)` for bounded primitives.
    pub fn bbox(&self) -> Option<(Complex64, Complex64)> {
        if !self.is_bounded() {
            return None;
        }
        let x1 = self.support(Complex64::new(1.0, 0.0));
        let x0 = -self.support(Complex64::new(-1.0, 0.0));
        let y1 = self.support(Complex64::new(0.0, 1.0));
        let y0 = -self.support(Complex64::new(0.0, -1.0));
        if [x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
            Some((Complex64::new(x0, y0), Complex64::new(x1, y1)))
        } else {
            None
        }
    }
}

fn window_for(z: Complex64) -> f64 {
    CROP_RADIUS.max(4.0 * z.norm())
}

fn sector_boundary(rmin: f64, rmax: f64, phimax: f64, window: f64) -> Vec<Curve> {
    let o = Complex64::new(0.0, 0.0);
    let rtop = if rmax.is_finite() { rmax } else { window.max(2.0 * rmin) };
    let mut out = Vec::new();
    if phimax >= PI {
        if rmin > 0.0 {
            out.push(Curve::circle(o, rmin));
        }
        if rmax.is_finite() {
            out.push(Curve::circle(o, rmax));
        }
        if out.is_empty() {
            out.push(Curve::point_curve(o));
        }
        return out;
    }
    if rmin > 0.0 {
        out.push(Curve::Arc { center: o, radius: rmin, start: -phimax, sweep: 2.0 * phimax });
    }
    if rmax.is_finite() {
        out.push(Curve::Arc { center: o, radius: rmax, start: -phimax, sweep: 2.0 * phimax });
    }
    for sgn in [1.0, -1.0] {
        let dir = Complex64::from_polar(1.0, sgn * phimax);
        out.push(Curve::Segment { a: dir * rmin, b: dir * rtop });
    }
    out
}

/// Distance from `z` to a convex polygon (0 inside). Degenerate polygons with
/// one or two vertices are a point or a segment.
pub(crate) fn polygon_distance(vertices: &[Complex64], z: Complex64) -> f64 {
    let n = vertices.len();
    match n {
        0 => f64::INFINITY,
        1 => (z - vertices[0]).norm(),
        _ => {
            let mut inside = n >= 3;
            let mut best = f64::INFINITY;
            for i in 0..n {
                let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                let e = b - a;
                if cross(e, z - a) < 0.0 {
                    inside = false;
                }
                let s = if e.norm_sqr() > 0.0 {
                    (dot(z - a, e) / e.norm_sqr()).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                best = best.min((z - (a + e * s)).norm());
            }
            if inside {
                0.0
            } else {
                best
            }
        }
    }
}

fn polygon_boundary(vertices: &[Complex64], dilation: f64) -> Vec<Curve> {
    let n = vertices.len();
    if n == 1 {
        return vec![if dilation > 0.0 {
            Curve::circle(vertices[0], dilation)
        } else {
            Curve::point_curve(vertices[0])
        }];
    }
    let normal = |i: usize| {
        let e = vertices[(i + 1) % n] - vertices[i];
        Complex64::new(e.im, -e.re) / e.norm()
    };
    let mut out = Vec::new();
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        if a == b {
            continue;
        }
        let off = normal(i) * dilation;
        out.push(Curve::Segment { a: a + off, b: b + off });
        if dilation > 0.0 {
            let prev = (0..n)
                .map(|k| (i + n - 1 - k) % n)
                .find(|&k| vertices[k] != vertices[(k + 1) % n])
                .unwrap_or(i);
            let (t0, t1) = (normal(prev).arg(), normal(i).arg());
            let mut sweep = t1 - t0;
            while sweep < 0.0 {
                sweep += 2.0 * PI;
            }
            out.push(Curve::Arc { center: a, radius: dilation, start: t0, sweep });
        }
    }
    out
}

/// Curves that contain the boundary of the dilation of a set bounded by `curves`.
fn dilated_boundary(curves: &[Curve], r: f64) -> Vec<Curve> {
    let mut out = Vec::new();
    for c in curves {
        match c {
            Curve::Arc { center, radius, start, sweep } => {
                for rr in [radius + r, radius - r] {
                    if rr > 0.0 {
                        out.push(Curve::Arc { center: *center, radius: rr, start: *start, sweep: *sweep });
                    }
                }
            }
            Curve::Segment { a, b } if a != b => {
                let e = b - a;
                let nrm = Complex64::new(e.im, -e.re) / e.norm() * r;
                out.push(Curve::Segment { a: a + nrm, b: b + nrm });
                out.push(Curve::Segment { a: a - nrm, b: b - nrm });
            }
            Curve::Segment { .. } => {}
            Curve::Param(_) => {
                for sgn in [1.0, -1.0] {
                    let inner = c.clone();
                    out.push(Curve::param(move |s| {
                        let h = 1e-6;
                        let (s0, s1) = ((s - h).max(0.0), (s + h).min(1.0));
                        let d = inner.point(s1) - inner.point(s0);
                        let p = inner.point(s);
                        if d.norm() == 0.0 {
                            return p;
                        }
                        p + Complex64::new(d.im, -d.re) / d.norm() * (sgn * r)
                    }));
                }
            }
        }
        if r > 0.0 {
            out.push(Curve::circle(c.start(), r));
            out.push(Curve::circle(c.end(), r));
        }
    }
    out
}

/// Pieces of `curve` on which `inside` holds, with endpoints located by bisection.
pub(crate) fn restrict_curve(curve: &Curve, inside: &dyn Fn(Complex64) -> bool, samples: usize) -> Vec<Curve> {
    let m = samples.max(8);
    let flags: Vec<bool> = (0..=m).map(|i| inside(curve.point(i as f64 / m as f64))).collect();
    let pred = |s: f64| inside(curve.point(s));
    let mut out = Vec::new();
    let mut i = 0;
    while i <= m {
        if !flags[i] {
            i += 1;
            continue;
        }
        let start_idx = i;
        while i < m && flags[i + 1] {
            i += 1;
        }
        let end_idx = i;
        let s0 = if start_idx == 0 {
            0.0
        } else {
            bisect_boundary(pred, start_idx as f64 / m as f64, (start_idx - 1) as f64 / m as f64)
        };
        let s1 = if end_idx == m {
            1.0
        } else {
            bisect_boundary(pred, end_idx as f64 / m as f64, (end_idx + 1) as f64 / m as f64)
        };
        out.push(curve.sub(s0, s1));
        i += 1;
    }
    out
}

fn intersection_boundary(parts: &[Primitive]) -> Vec<Curve> {
    let mut extent: f64 = 0.0;
    for p in parts.iter().filter(|p| p.is_bounded()) {
        if let Some((lo, hi)) = p.bbox() {
            extent = extent.max(lo.norm()).max(hi.norm());
        }
    }
    let window = if extent > 0.0 { 4.0 * extent + 1.0 } else { CROP_RADIUS };
    let res = super::region::default_resolution();
    let mut out = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        let others = |z: Complex64| parts.iter().enumerate().all(|(k, q)| k == i || q.contains(z));
        for c in p.boundary(window) {
            out.extend(restrict_curve(&c, &others, res));
        }
    }
    out
}

/// `sup ⟨1/conj(y), n⟩` over a region `Y`, using the exact inverted-disc
/// formula when `Y` is a dilation.
fn inverted_support(region: &Region, n: Complex64) -> f64 {
    let zero = Complex64::new(0.0, 0.0);
    if region.contains(zero) && region.signed_distance(zero) > 0.0 {
        return f64::INFINITY;
    }
    let mut best = f64::NEG_INFINITY;
    for prim in &region.primitives {
        let v = match prim {
            Primitive::Dilated { region: inner, radius, .. } => {
                let r = *radius;
                let mut v = f64::NEG_INFINITY;
                for c in inner.boundary_curves() {
                    let f = |x: Complex64| {
                        let d = x.norm_sqr() - r * r;
                        if d <= 0.0 {
                            f64::NEG_INFINITY
                        } else {
                            dot(x / d, n) + r / d * n.norm()
                        }
                    };
                    if c.sample(64).iter().any(|x| x.norm() <= r) {
                        return f64::INFINITY;
                    }
                    v = v.max(-c.minimize(|x| -f(x), 257).0);
                }
                v
            }
            _ => {
                let mut v = f64::NEG_INFINITY;
                for c in prim.boundary(CROP_RADIUS) {
                    let (m, _, p) = c.minimize(
                        |y| {
                            let w = invert(y);
                            if w.re.is_finite() && w.im.is_finite() {
                                -dot(w, n)
                            } else {
                                f64::INFINITY
                            }
                        },
                        257,
                    );
                    if p.norm() < 1e-9 && -m > 1e6 {
                        return f64::INFINITY;
                    }
                    v = v.max(-m);
                }
                v
            }
        };
        best = best.max(v);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn half_plane_membership_and_support() {
        let hp = Primitive::half_plane(0.0, 1.0);
        assert!(hp.contains(c(1.0, 5.0)));
        assert!(!hp.contains(c(0.9, 0.0)));
        assert_eq!(hp.support(c(-1.0, 0.0)), -1.0);
        assert!(hp.support(c(1.0, 0.0)).is_infinite());
        assert!((hp.point_distance(c(-1.0, 3.0)) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn sector_membership() {
        let s = Primitive::AnnularSector { rmin: 1.0, rmax: 2.0, phimax: PI / 4.0 };
        assert!(s.contains(Complex64::from_polar(1.5, 0.7)));
        assert!(!s.contains(Complex64::from_polar(1.5, 0.9)));
        assert!(!s.contains(c(0.5, 0.0)));
        assert!((s.point_distance(c(3.0, 0.0)) - 1.0).abs() < 1e-12);
        assert!((s.support(c(1.0, 0.0)) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cascade_membership() {
        let cas = Primitive::Cascade { gammas: vec![1.0, 1.0, 1.0] };
        assert!(cas.contains(c(-0.125, 0.0)));
        assert!(!cas.contains(c(-0.13, 0.0)));
        assert!(cas.contains(c(0.999, 0.0)));
        let one = Primitive::Cascade { gammas: vec![2.0] };
        assert!(one.contains(c(1.0, 0.99)));
        assert!(!one.contains(c(1.0, 1.01)));
    }

    #[test]
    fn polygon_with_dilation() {
        let sq = vec![c(0.0, -1.0), c(1.0, -1.0), c(1.0, 1.0), c(0.0, 1.0)];
        let p = Primitive::Polygon { vertices: sq, dilation: 0.5 };
        assert!(p.contains(c(1.4, 0.0)));
        assert!(!p.contains(c(1.6, 0.0)));
        assert!((p.support(c(1.0, 0.0)) - 1.5).abs() < 1e-15);
        assert!((p.point_distance(c(2.0, 0.0)) - 0.5).abs() < 1e-15);
        let b = p.boundary(10.0);
        assert_eq!(b.len(), 8);
    }

    #[test]
    fn intersection_boundary_corners() {
        let inter = Primitive::intersection(vec![
            Primitive::disc(1.0, 1.0),
            Primitive::AnnularSector { rmin: 0.5, rmax: f64::INFINITY, phimax: PI },
        ]);
        // Leftmost point: |z| = 0.5 on the circle |z - 1| = 1, Re z = 0.125.
        let s = -inter.support(c(-1.0, 0.0));
        assert!((s - 0.125).abs() < 1e-10, "{s}");
    }
}
