//! Separation distance between regions.

use num_complex::Complex64;
use rayon::prelude::*;

use super::curve::golden_min;
use super::primitive::Primitive;
use super::region::{sample_curves, Region};
use crate::error::{Result, SrgError};

/// Distance between two regions together with the boundary sample spacing
/// used by the sampled search (0 when only closed forms were needed).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistanceReport {
    pub distance: f64,
    pub spacing: f64,
}

/// `inf |a - b|` over `a ∈ A`, `b ∈ B`.
pub fn region_distance(a: &Region, b: &Region) -> Result<f64> {
    Ok(region_distance_report(a, b)?.distance)
}

pub fn region_distance_report(a: &Region, b: &Region) -> Result<DistanceReport> {
    if a.is_empty() || b.is_empty() {
        return Err(SrgError::Empty("distance to an empty region".into()));
    }
    if a.includes_infinity && b.includes_infinity {
        return Ok(DistanceReport { distance: 0.0, spacing: 0.0 });
    }
    let res = a.resolution.max(b.resolution);
    let pairs: Vec<(&Primitive, &Primitive)> = a
        .primitives
        .iter()
        .flat_map(|p| b.primitives.iter().map(move |q| (p, q)))
        .collect();
    let reports: Vec<DistanceReport> = pairs
        .par_iter()
        .map(|(p, q)| pair_distance(p, q, res))
        .collect();
    let mut out = DistanceReport { distance: f64::INFINITY, spacing: 0.0 };
    for r in reports {
        out.distance = out.distance.min(r.distance);
        out.spacing = out.spacing.max(r.spacing);
    }
    Ok(out)
}

fn rank(p: &Primitive) -> u8 {
    match p {
        Primitive::Disc { .. } => 0,
        Primitive::HalfPlane { .. } => 1,
        Primitive::Dilated { .. } => 2,
        Primitive::Polygon { dilation, .. } if *dilation > 0.0 => 3,
        _ => 4,
    }
}

/// Symmetric in its arguments: the reduction is chosen by kind, and equal
/// kinds take the smaller of both orders.
pub(crate) fn pair_distance(p: &Primitive, q: &Primitive, res: usize) -> DistanceReport {
    let (rp, rq) = (rank(p), rank(q));
    if rp < rq {
        ordered_distance(p, q, res)
    } else if rq < rp {
        ordered_distance(q, p, res)
    } else {
        let x = ordered_distance(p, q, res);
        let y = ordered_distance(q, p, res);
        DistanceReport { distance: x.distance.min(y.distance), spacing: x.spacing.max(y.spacing) }
    }
}

fn exact(d: f64) -> DistanceReport {
    DistanceReport { distance: d.max(0.0), spacing: 0.0 }
}

fn ordered_distance(p: &Primitive, q: &Primitive, res: usize) -> DistanceReport {
    match p {
        Primitive::Disc { center, radius } => exact(q.point_distance(*center) - radius),
        Primitive::HalfPlane { angle, offset } => {
            let s = q.support(Complex64::from_polar(1.0, *angle));
            exact(if s.is_finite() { offset - s } else { 0.0 })
        }
        Primitive::Dilated { region, radius, .. } => {
            let mut r = DistanceReport { distance: f64::INFINITY, spacing: 0.0 };
            for inner in &region.primitives {
                let d = pair_distance(inner, q, res);
                r.distance = r.distance.min(d.distance);
                r.spacing = r.spacing.max(d.spacing);
            }
            r.distance = (r.distance - radius).max(0.0);
            r
        }
        Primitive::Polygon { vertices, dilation } if *dilation > 0.0 => {
            let core = Primitive::Polygon { vertices: vertices.clone(), dilation: 0.0 };
            let mut r = pair_distance(&core, q, res);
            r.distance = (r.distance - dilation).max(0.0);
            r
        }
        _ => sampled_distance(p, q, res),
    }
}

/// Boundary-sampled search: any boundary sample inside the other set means
/// contact; otherwise minimise the exact point distance to `q` along the
/// boundary of `p` and refine the best candidates by golden section.
fn sampled_distance(p: &Primitive, q: &Primitive, res: usize) -> DistanceReport {
    let window = super::primitive::CROP_RADIUS;
    let pc = p.boundary(window);
    let qc = q.boundary(window);
    let ps = sample_curves(&pc, res);
    let qs = sample_curves(&qc, res);
    if ps.iter().any(|z| q.contains(*z)) || qs.iter().any(|z| p.contains(*z)) {
        return DistanceReport { distance: 0.0, spacing: spacing_of(&ps) };
    }
    let total: f64 = pc.iter().map(|c| c.length()).sum();
    let mut cands: Vec<(f64, usize, f64, f64)> = Vec::new();
    for (ci, c) in pc.iter().enumerate() {
        let n = if total > 0.0 {
            ((res as f64) * c.length() / total).ceil() as usize
        } else {
            2
        }
        .max(3);
        let h = 1.0 / (n - 1) as f64;
        for i in 0..n {
            let s = i as f64 * h;
            cands.push((q.point_distance(c.point(s)), ci, s, h));
        }
    }
    cands.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = cands.first().map(|c| c.0).unwrap_or(f64::INFINITY);
    for &(_, ci, s, h) in cands.iter().take(8) {
        let c = &pc[ci];
        let (_, v) = golden_min(|t| q.point_distance(c.point(t)), (s - h).max(0.0), (s + h).min(1.0));
        best = best.min(v);
    }
    DistanceReport { distance: best.max(0.0), spacing: spacing_of(&ps) }
}

fn spacing_of(pts: &[Complex64]) -> f64 {
    pts.windows(2)
        .map(|w| (w[1] - w[0]).norm())
        .filter(|d| d.is_finite())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::algebra::region_invert;
    use std::f64::consts::PI;

    #[test]
    fn disc_to_point() {
        let d = region_distance(&Region::disc(0.5, 0.5), &Region::point(-1.0)).unwrap();
        assert!((d - 1.0).abs() < 1e-15);
    }

    #[test]
    fn parallel_half_planes() {
        let d = region_distance(&Region::re_at_least(0.5), &Region::re_at_most(0.0)).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn inverted_passive_disc_against_left_half_plane() {
        let h = Region::from_primitive(Primitive::intersection(vec![
            Primitive::disc(0.0, 2.0),
            Primitive::half_plane(0.0, 0.5),
        ]));
        let inv = region_invert(&h);
        let d = region_distance(&inv, &Region::re_at_most(0.0)).unwrap();
        assert!((d - 0.125).abs() < 1e-9, "{d}");
    }

    #[test]
    fn infinity_on_both_sides_touches() {
        let a = Region::re_at_least(1.0).with_infinity(true);
        let b = Region::re_at_most(0.0).with_infinity(true);
        assert_eq!(region_distance(&a, &b).unwrap(), 0.0);
        assert!(region_distance(&Region::empty(), &b).is_err());
    }

    #[test]
    fn sector_to_hull_sampled() {
        let s = Region::from_primitive(Primitive::AnnularSector { rmin: 1.0, rmax: 2.0, phimax: PI / 6.0 });
        let pts: Vec<Complex64> = (0..=64)
            .map(|i| Complex64::new(-3.0, 0.0) + Complex64::from_polar(0.5, PI * i as f64 / 64.0))
            .collect();
        let h = Region::hull(&pts, true).unwrap();
        let d = region_distance(&s, &h).unwrap();
        let expect = (Complex64::new(-3.0, 0.0) - Complex64::from_polar(1.0, PI / 6.0)).norm() - 0.5;
        assert!((d - expect).abs() < 1e-9, "{d} vs {expect}");
        assert_eq!(d, region_distance(&h, &s).unwrap());
    }
}
