//! Region algebra: real scaling and shifting, inversion, Minkowski sums and
//! products. Sums and products return outer approximations.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::closure::{has_arc_property, has_chord_property, DEFAULT_PROPERTY_POINTS};
use super::curve::Curve;
use super::point::{cross, invert, wrap_angle};
use super::primitive::{ArcSide, Primitive};
use super::region::Region;
use crate::error::{Result, SrgError};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Pointwise `α·A` for real `α ≠ 0`.
pub fn region_scale(a: &Region, alpha: f64) -> Result<Region> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(SrgError::InvalidParameter(format!("scale factor must be finite and nonzero, got {alpha}")));
    }
    Ok(map_region(a, alpha, 0.0))
}

/// Pointwise `c + A` for real `c`.
pub fn region_shift(a: &Region, c: f64) -> Region {
    map_region(a, 1.0, c)
}

fn map_region(a: &Region, s: f64, t: f64) -> Region {
    Region {
        primitives: a.primitives.iter().map(|p| affine_primitive(p, s, t)).collect(),
        includes_infinity: a.includes_infinity,
        resolution: a.resolution,
    }
}

/// Image of a primitive under `z ↦ s z + t`.
pub(crate) fn affine_primitive(p: &Primitive, s: f64, t: f64) -> Primitive {
    let tc = Complex64::new(t, 0.0);
    match p {
        Primitive::Disc { center, radius } => Primitive::Disc { center: center * s + tc, radius: radius * s.abs() },
        Primitive::Circle { center, radius } => {
            Primitive::Circle { center: center * s + tc, radius: radius * s.abs() }
        }
        Primitive::HalfPlane { angle, offset } => {
            let base = s * offset + t * angle.cos();
            if s > 0.0 {
                Primitive::HalfPlane { angle: *angle, offset: base }
            } else {
                Primitive::HalfPlane { angle: wrap_angle(angle + PI), offset: -base }
            }
        }
        Primitive::AnnularSector { rmin, rmax, phimax } if t == 0.0 && (s > 0.0 || *phimax >= PI) => {
            Primitive::AnnularSector { rmin: rmin * s.abs(), rmax: rmax * s.abs(), phimax: *phimax }
        }
        Primitive::HulledCurve(h) => match h.map_samples(|z| z * s + tc) {
            Ok(m) => Primitive::HulledCurve(m),
            Err(_) => Primitive::affine(s, t, Region::from_primitive(p.clone())),
        },
        Primitive::Cascade { gammas } if t == 0.0 && s > 0.0 => {
            let mut g = gammas.clone();
            g[0] *= s;
            Primitive::Cascade { gammas: g }
        }
        Primitive::Polygon { vertices, dilation } => Primitive::Polygon {
            vertices: vertices.iter().map(|v| v * s + tc).collect(),
            dilation: dilation * s.abs(),
        },
        Primitive::Intersection { parts, .. } => {
            Primitive::intersection(parts.iter().map(|q| affine_primitive(q, s, t)).collect())
        }
        Primitive::Dilated { region, radius, .. } => Primitive::dilated(map_region(region, s, t), radius * s.abs()),
        Primitive::Affine { scale, shift, region } => Primitive::affine(s * scale, s * shift + t, (**region).clone()),
        _ => Primitive::affine(s, t, Region::from_primitive(p.clone())),
    }
}

/// Image under `z ↦ 1/conj(z)`, exchanging 0 and ∞.
pub fn region_invert(a: &Region) -> Region {
    let mut prims: Vec<Primitive> = a.primitives.iter().flat_map(invert_primitive).collect();
    let has_inf = a.contains(ZERO);
    if a.includes_infinity && !prims.iter().any(|p| p.contains(ZERO)) {
        prims.push(Primitive::disc(0.0, 0.0));
    }
    Region { primitives: prims, includes_infinity: has_inf, resolution: a.resolution }
}

fn wrapped_inverse(p: &Primitive) -> Primitive {
    Primitive::inverted(Region::from_primitive(p.clone()))
}

fn invert_primitive(p: &Primitive) -> Vec<Primitive> {
    match p {
        Primitive::Disc { center, radius } => {
            let (c, r) = (*center, *radius);
            if r == 0.0 {
                return if c == ZERO { Vec::new() } else { vec![Primitive::Disc { center: invert(c), radius: 0.0 }] };
            }
            let cn = c.norm();
            if c == ZERO {
                return vec![Primitive::AnnularSector { rmin: 1.0 / r, rmax: f64::INFINITY, phimax: PI }];
            }
            if (cn - r).abs() <= 1e-12 * r {
                return vec![Primitive::HalfPlane { angle: c.arg(), offset: 1.0 / (2.0 * r) }];
            }
            if cn > r {
                let d = cn * cn - r * r;
                return vec![Primitive::Disc { center: c / d, radius: r / d }];
            }
            vec![wrapped_inverse(p)]
        }
        Primitive::Circle { center, radius } => {
            let d = center.norm_sqr() - radius * radius;
            if d.abs() > 1e-12 * radius.max(1.0) && *radius > 0.0 {
                vec![Primitive::Circle { center: center / d, radius: radius / d.abs() }]
            } else {
                vec![wrapped_inverse(p)]
            }
        }
        Primitive::HalfPlane { angle, offset } => {
            if *offset > 0.0 {
                vec![Primitive::Disc {
                    center: Complex64::from_polar(1.0 / (2.0 * offset), *angle),
                    radius: 1.0 / (2.0 * offset),
                }]
            } else if *offset == 0.0 {
                vec![p.clone()]
            } else {
                vec![wrapped_inverse(p)]
            }
        }
        Primitive::AnnularSector { rmin, rmax, phimax } => vec![Primitive::AnnularSector {
            rmin: if rmax.is_finite() { 1.0 / rmax } else { 0.0 },
            rmax: if *rmin > 0.0 { 1.0 / rmin } else { f64::INFINITY },
            phimax: *phimax,
        }],
        Primitive::HulledCurve(h) if !h.contains(ZERO) => match h.map_samples(invert) {
            Ok(m) => vec![Primitive::HulledCurve(m)],
            Err(_) => vec![wrapped_inverse(p)],
        },
        Primitive::Inverted { region, .. } => region.primitives.clone(),
        Primitive::Intersection { parts, .. } => {
            let inv: Vec<Vec<Primitive>> = parts.iter().map(invert_primitive).collect();
            if inv.iter().all(|v| v.len() == 1) {
                vec![Primitive::intersection(inv.into_iter().map(|mut v| v.remove(0)).collect())]
            } else {
                vec![wrapped_inverse(p)]
            }
        }
        _ => vec![wrapped_inverse(p)],
    }
}

/// Intersects unbounded primitives with `D(0, radius)` and drops `∞`, giving a
/// bounded region usable by the sum and product rules.
pub fn region_crop(a: &Region, radius: f64) -> Region {
    let prims = a
        .primitives
        .iter()
        .map(|p| {
            if p.is_bounded() {
                p.clone()
            } else {
                Primitive::intersection(vec![p.clone(), Primitive::disc(0.0, radius)])
            }
        })
        .collect();
    Region { primitives: prims, includes_infinity: false, resolution: a.resolution }
}

pub fn region_union(a: &Region, b: &Region) -> Region {
    let mut prims = a.primitives.clone();
    prims.extend(b.primitives.iter().cloned());
    Region {
        primitives: prims,
        includes_infinity: a.includes_infinity || b.includes_infinity,
        resolution: a.resolution.max(b.resolution),
    }
}

fn check_finite_operands(a: &Region, b: &Region, op: &str) -> Result<()> {
    for r in [a, b] {
        if r.includes_infinity || !r.is_bounded() {
            return Err(SrgError::ContainsInfinity(format!(
                "{op} needs bounded operands without the point at infinity; crop them first"
            )));
        }
        if r.primitives.is_empty() {
            return Err(SrgError::Empty(format!("{op} of an empty region")));
        }
    }
    Ok(())
}

/// Outer bound of `{a + b}`.
pub fn minkowski_sum(a: &Region, b: &Region) -> Result<Region> {
    Ok(minkowski_sum_flagged(a, b)?.0)
}

/// As [`minkowski_sum`], also returning conservatism notes.
pub fn minkowski_sum_flagged(a: &Region, b: &Region) -> Result<(Region, Vec<String>)> {
    check_finite_operands(a, b, "minkowski_sum")?;
    let mut flags = Vec::new();
    let mut prims = Vec::new();
    let mut convexified = false;
    for p in &a.primitives {
        for q in &b.primitives {
            let (s, exact) = sum_pair(p, q);
            convexified |= !exact;
            prims.push(s);
        }
    }
    if convexified {
        flags.push("minkowski_sum: convex outer bound of sampled boundaries".to_string());
        if !has_chord_property(a, DEFAULT_PROPERTY_POINTS) && !has_chord_property(b, DEFAULT_PROPERTY_POINTS) {
            flags.push("minkowski_sum: neither operand has the chord property".to_string());
        }
    }
    let r = Region { primitives: prims, includes_infinity: false, resolution: a.resolution.max(b.resolution) };
    Ok((r, flags))
}

fn sum_pair(p: &Primitive, q: &Primitive) -> (Primitive, bool) {
    match (p, q) {
        (Primitive::Disc { center: c1, radius: r1 }, Primitive::Disc { center: c2, radius: r2 }) => {
            (Primitive::Disc { center: c1 + c2, radius: r1 + r2 }, true)
        }
        (Primitive::Disc { center, radius }, other) | (other, Primitive::Disc { center, radius })
            if center.im == 0.0 =>
        {
            let shifted = affine_primitive(other, 1.0, center.re);
            if *radius == 0.0 {
                (shifted, true)
            } else {
                (Primitive::dilated(Region::from_primitive(shifted), *radius), true)
            }
        }
        (Primitive::Dilated { region, radius, .. }, other) | (other, Primitive::Dilated { region, radius, .. }) => {
            let mut prims = Vec::new();
            let mut exact = true;
            for inner in &region.primitives {
                let (s, e) = sum_pair(inner, other);
                exact &= e;
                prims.push(s);
            }
            (Primitive::dilated(Region::new(prims, false), *radius), exact)
        }
        _ => {
            let (pv, pe) = convex_cover(p);
            let (qv, qe) = convex_cover(q);
            let exact = matches!((p, q), (Primitive::Polygon { .. }, Primitive::Polygon { .. }));
            (Primitive::Polygon { vertices: convex_polygon_sum(&pv, &qv), dilation: pe + qe }, exact)
        }
    }
}

/// Vertices of a convex polygon containing the primitive, and an extra
/// dilation absorbing the sampling error of parametric curves.
fn convex_cover(p: &Primitive) -> (Vec<Complex64>, f64) {
    if let Primitive::Polygon { vertices, dilation } = p {
        return (convex_hull(vertices), *dilation);
    }
    let mut pts = Vec::new();
    let mut err: f64 = 0.0;
    for c in p.boundary(super::primitive::CROP_RADIUS) {
        match &c {
            Curve::Segment { a, b } => {
                pts.push(*a);
                pts.push(*b);
            }
            Curve::Arc { center, radius, start, sweep } => {
                let k = ((sweep / (PI / 64.0)).ceil() as usize).max(1);
                let step = sweep / k as f64;
                pts.push(c.start());
                pts.push(c.end());
                for i in 0..k {
                    let mid = start + step * (i as f64 + 0.5);
                    pts.push(center + Complex64::from_polar(radius / (step / 2.0).cos(), mid));
                }
            }
            Curve::Param(_) => {
                let s = c.sample(2049);
                for w in s.windows(2) {
                    err = err.max(0.5 * (w[1] - w[0]).norm());
                }
                pts.extend(s);
            }
        }
    }
    (convex_hull(&pts), err)
}

/// Euclidean convex hull, counter-clockwise, collinear points removed.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = points.iter().copied().filter(|z| z.re.is_finite() && z.im.is_finite()).collect();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Complex64> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 1] - lower[lower.len() - 2], p - lower[lower.len() - 2]) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Complex64> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 1] - upper[upper.len() - 2], p - upper[upper.len() - 2]) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Minkowski sum of two convex polygons by merging edge directions.
pub fn convex_polygon_sum(p: &[Complex64], q: &[Complex64]) -> Vec<Complex64> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    if p.len() < 3 || q.len() < 3 {
        let sums: Vec<Complex64> = p.iter().flat_map(|a| q.iter().map(move |b| a + b)).collect();
        return convex_hull(&sums);
    }
    let start = |v: &[Complex64]| {
        (0..v.len())
            .min_by(|&i, &j| v[i].im.total_cmp(&v[j].im).then(v[i].re.total_cmp(&v[j].re)))
            .unwrap()
    };
    let (i0, j0) = (start(p), start(q));
    let (n, m) = (p.len(), q.len());
    let mut out = Vec::with_capacity(n + m);
    let (mut i, mut j) = (0, 0);
    while i < n || j < m {
        out.push(p[(i0 + i) % n] + q[(j0 + j) % m]);
        let ep = p[(i0 + i + 1) % n] - p[(i0 + i) % n];
        let eq = q[(j0 + j + 1) % m] - q[(j0 + j) % m];
        let c = cross(ep, eq);
        if j >= m || (i < n && c > 0.0) {
            i += 1;
        } else if i >= n || c < 0.0 {
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    convex_hull(&out)
}

/// Outer bound of `{a·b}`.
pub fn region_product(a: &Region, b: &Region) -> Result<Region> {
    Ok(region_product_flagged(a, b)?.0)
}

pub fn region_product_flagged(a: &Region, b: &Region) -> Result<(Region, Vec<String>)> {
    check_finite_operands(a, b, "region_product")?;
    let mut prims = Vec::new();
    let mut covered = false;
    for p in &a.primitives {
        for q in &b.primitives {
            let (r, exact) = product_pair(p, q);
            covered |= !exact;
            prims.push(r);
        }
    }
    let mut flags = Vec::new();
    if covered {
        flags.push("region_product: polar or disc cover".to_string());
        let arc = |r: &Region| {
            has_arc_property(r, ArcSide::Right, DEFAULT_PROPERTY_POINTS)
                || has_arc_property(r, ArcSide::Left, DEFAULT_PROPERTY_POINTS)
        };
        if !arc(a) && !arc(b) {
            flags.push("region_product: neither operand has an arc property".to_string());
        }
    }
    let r = Region { primitives: prims, includes_infinity: false, resolution: a.resolution.max(b.resolution) };
    Ok((r, flags))
}

fn real_point(p: &Primitive) -> Option<f64> {
    match p {
        Primitive::Disc { center, radius } if *radius == 0.0 && center.im == 0.0 => Some(center.re),
        _ => None,
    }
}

fn product_pair(p: &Primitive, q: &Primitive) -> (Primitive, bool) {
    if let Some(k) = real_point(p).or(real_point(q)) {
        let other = if real_point(p).is_some() { q } else { p };
        return if k == 0.0 { (Primitive::disc(0.0, 0.0), true) } else { (affine_primitive(other, k, 0.0), true) };
    }
    match (p, q) {
        (
            Primitive::AnnularSector { rmin: a0, rmax: a1, phimax: pa },
            Primitive::AnnularSector { rmin: b0, rmax: b1, phimax: pb },
        ) => (Primitive::AnnularSector { rmin: a0 * b0, rmax: a1 * b1, phimax: (pa + pb).min(PI) }, true),
        (Primitive::Disc { center: c1, radius: r1 }, Primitive::Disc { center: c2, radius: r2 }) => (
            Primitive::Disc { center: c1 * c2, radius: c1.norm() * r2 + c2.norm() * r1 + r1 * r2 },
            false,
        ),
        (Primitive::AnnularSector { rmin, rmax, phimax }, other)
        | (other, Primitive::AnnularSector { rmin, rmax, phimax })
            if *phimax >= PI =>
        {
            let (lo, hi, _) = polar_extent(other);
            (Primitive::AnnularSector { rmin: rmin * lo, rmax: rmax * hi, phimax: PI }, true)
        }
        _ => {
            let (a0, a1, pa) = polar_extent(p);
            let (b0, b1, pb) = polar_extent(q);
            (Primitive::AnnularSector { rmin: a0 * b0, rmax: a1 * b1, phimax: (pa + pb).min(PI) }, false)
        }
    }
}

/// Smallest and largest modulus and largest `|arg|` over a bounded primitive.
fn polar_extent(p: &Primitive) -> (f64, f64, f64) {
    let r = Region::from_primitive(p.clone());
    let rmin = p.point_distance(ZERO);
    let rmax = r.max_modulus();
    let phi = if p.contains(ZERO) && p.signed_distance(ZERO) > 1e-12 {
        PI
    } else {
        r.boundary_curves()
            .iter()
            .map(|c| {
                if c.sample(65).iter().any(|z| z.re < 0.0 && z.im == 0.0) {
                    PI
                } else {
                    -c.minimize(|z| if z.norm() == 0.0 { 0.0 } else { -z.arg().abs() }, 257).0
                }
            })
            .fold(0.0, f64::max)
    };
    (rmin, rmax, (phi * (1.0 + 1e-9)).min(PI))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn scale_and_shift_examples() {
        let d = region_scale(&Region::disc(0.5, 0.5), 2.0).unwrap();
        match &d.primitives[0] {
            Primitive::Disc { center, radius } => {
                assert_eq!(*center, c(1.0, 0.0));
                assert_eq!(*radius, 1.0);
            }
            _ => panic!(),
        }
        let hp = region_shift(&Region::re_at_least(0.0), 1.0);
        assert!(hp.contains(c(1.0, 7.0)) && !hp.contains(c(0.99, 0.0)));
        let m = region_scale(&Region::disc(1.0, 0.5), -0.5).unwrap();
        match &m.primitives[0] {
            Primitive::Disc { center, radius } => {
                assert_eq!(*center, c(-0.5, 0.0));
                assert_eq!(*radius, 0.25);
            }
            _ => panic!(),
        }
        assert!(region_scale(&m, 0.0).is_err());
        let neg = region_scale(&Region::re_at_least(1.0), -2.0).unwrap();
        assert!(neg.contains(c(-2.0, 3.0)) && !neg.contains(c(-1.9, 0.0)));
    }

    #[test]
    fn inversion_examples() {
        let hp = region_invert(&Region::disc(1.0, 1.0));
        assert!(hp.includes_infinity);
        assert!(hp.contains(c(0.5, 10.0)) && !hp.contains(c(0.49, 0.0)));
        let s = region_invert(&Region::from_primitive(Primitive::AnnularSector {
            rmin: 1.0,
            rmax: 2.0,
            phimax: PI / 4.0,
        }));
        match &s.primitives[0] {
            Primitive::AnnularSector { rmin, rmax, phimax } => {
                assert_eq!((*rmin, *rmax, *phimax), (0.5, 1.0, PI / 4.0));
            }
            _ => panic!(),
        }
        let twice = region_invert(&region_invert(&Region::disc(3.0, 1.0)));
        match &twice.primitives[0] {
            Primitive::Disc { center, radius } => {
                assert!((center - c(3.0, 0.0)).norm() < 1e-9 && (radius - 1.0).abs() < 1e-9);
            }
            _ => panic!(),
        }
        let ext = region_invert(&Region::disc(0.5, 1.0));
        assert!(ext.contains(c(10.0, 0.0)) && !ext.contains(c(0.3, 0.0)));
    }

    #[test]
    fn sum_examples() {
        let s = minkowski_sum(&Region::disc(0.5, 0.5), &Region::disc(0.25, 0.25)).unwrap();
        match &s.primitives[0] {
            Primitive::Disc { center, radius } => assert_eq!((center.re, *radius), (0.75, 0.75)),
            _ => panic!(),
        }
        let a = Region::from_primitive(Primitive::AnnularSector { rmin: 1.0, rmax: 2.0, phimax: 0.5 });
        let id = minkowski_sum(&a, &Region::point(0.0)).unwrap();
        for z in [c(1.5, 0.1), c(3.0, 0.0), c(0.5, 0.0)] {
            assert_eq!(a.contains(z), id.contains(z));
        }
        assert!(minkowski_sum(&Region::re_at_least(0.0), &a).is_err());
    }

    #[test]
    fn product_examples() {
        let s1 = Region::from_primitive(Primitive::AnnularSector { rmin: 1.0, rmax: 2.0, phimax: PI / 6.0 });
        let s2 = Region::from_primitive(Primitive::AnnularSector { rmin: 1.0, rmax: 3.0, phimax: PI / 6.0 });
        let p = region_product(&s1, &s2).unwrap();
        match &p.primitives[0] {
            Primitive::AnnularSector { rmin, rmax, phimax } => {
                assert_eq!((*rmin, *rmax), (1.0, 6.0));
                assert!((phimax - PI / 3.0).abs() < 1e-15);
            }
            _ => panic!(),
        }
        let d = region_product(&Region::disc(0.5, 0.5), &Region::disc(0.5, 0.5)).unwrap();
        match &d.primitives[0] {
            Primitive::Disc { center, radius } => assert_eq!((center.re, *radius), (0.25, 0.75)),
            _ => panic!(),
        }
        let id = region_product(&s1, &Region::point(1.0)).unwrap();
        assert!(id.contains(Complex64::from_polar(1.5, 0.5)) && !id.contains(c(2.5, 0.0)));
    }

    #[test]
    fn convex_sum_of_squares() {
        let sq = vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)];
        let s = convex_polygon_sum(&sq, &sq);
        assert_eq!(s.len(), 4);
        assert!(s.contains(&c(2.0, 2.0)));
    }
}
