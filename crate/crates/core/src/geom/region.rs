//! Regions of the extended complex plane: unions of primitives plus the point
//! at infinity.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::curve::Curve;
use super::hull::Hull;
use super::point::ExtPoint;
use super::primitive::{Primitive, CROP_RADIUS};
use crate::error::{Result, SrgError};

pub const DEFAULT_RESOLUTION: usize = 1024;

/// Boundary resolution, overridable through `SRGKIT_RESOLUTION`.
pub fn default_resolution() -> usize {
    std::env::var("SRGKIT_RESOLUTION")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n >= 16)
        .unwrap_or(DEFAULT_RESOLUTION)
}

/// Conjugate-symmetric subset of the extended plane, interpreted as the union
/// of its primitives, plus `∞` when `includes_infinity` is set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Region {
    pub primitives: Vec<Primitive>,
    pub includes_infinity: bool,
    pub resolution: usize,
}

impl Region {
    pub fn new(primitives: Vec<Primitive>, includes_infinity: bool) -> Self {
        Region { primitives, includes_infinity, resolution: default_resolution() }
    }

    pub fn from_primitive(p: Primitive) -> Self {
        Self::new(vec![p], false)
    }

    pub fn empty() -> Self {
        Self::new(Vec::new(), false)
    }

    /// Single real point.
    pub fn point(x: f64) -> Self {
        Self::from_primitive(Primitive::disc(x, 0.0))
    }

    pub fn disc(center: f64, radius: f64) -> Self {
        Self::from_primitive(Primitive::disc(center, radius))
    }

    /// `{Re z >= offset}` without the point at infinity.
    pub fn re_at_least(offset: f64) -> Self {
        Self::from_primitive(Primitive::half_plane(0.0, offset))
    }

    /// `{Re z <= offset}` without the point at infinity.
    pub fn re_at_most(offset: f64) -> Self {
        Self::from_primitive(Primitive::half_plane(std::f64::consts::PI, -offset))
    }

    pub fn hull(points: &[Complex64], filled: bool) -> Result<Self> {
        Ok(Self::from_primitive(Primitive::HulledCurve(Hull::new(points, filled)?)))
    }

    pub fn with_infinity(mut self, inf: bool) -> Self {
        self.includes_infinity = inf;
        self
    }

    pub fn with_resolution(mut self, resolution: usize) -> Self {
        self.resolution = resolution.max(16);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.primitives.is_empty() && !self.includes_infinity
    }

    pub fn is_bounded(&self) -> bool {
        self.primitives.iter().all(|p| p.is_bounded())
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.primitives.iter().any(|p| p.contains(z))
    }

    pub fn contains_ext(&self, z: ExtPoint) -> bool {
        match z {
            ExtPoint::Finite(w) => self.contains(w),
            ExtPoint::Infinity => self.includes_infinity,
        }
    }

    pub fn point_distance(&self, z: Complex64) -> f64 {
        self.primitives
            .iter()
            .map(|p| p.point_distance(z))
            .fold(f64::INFINITY, f64::min)
    }

    /// Positive inside, negative outside; magnitude is the distance to the boundary.
    pub fn signed_distance(&self, z: Complex64) -> f64 {
        self.primitives
            .iter()
            .map(|p| p.signed_distance(z))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn support(&self, n: Complex64) -> f64 {
        self.primitives
            .iter()
            .map(|p| p.support(n))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn bbox(&self) -> Option<(Complex64, Complex64)> {
        let mut acc: Option<(Complex64, Complex64)> = None;
        for p in &self.primitives {
            let (lo, hi) = p.bbox()?;
            acc = Some(match acc {
                None => (lo, hi),
                Some((a, b)) => (
                    Complex64::new(a.re.min(lo.re), a.im.min(lo.im)),
                    Complex64::new(b.re.max(hi.re), b.im.max(hi.im)),
                ),
            });
        }
        acc
    }

    /// Largest modulus of a point of the region.
    pub fn max_modulus(&self) -> f64 {
        if !self.is_bounded() {
            return f64::INFINITY;
        }
        self.boundary_curves()
            .iter()
            .map(|c| -c.minimize(|z| -z.norm(), 129).0)
            .fold(0.0, f64::max)
    }

    pub fn boundary_curves(&self) -> Vec<Curve> {
        let window = match self.bbox_of_bounded() {
            Some(e) => (4.0 * e + 1.0).min(CROP_RADIUS),
            None => CROP_RADIUS,
        };
        self.primitives.iter().flat_map(|p| p.boundary(window)).collect()
    }

    fn bbox_of_bounded(&self) -> Option<f64> {
        if self.is_bounded() {
            return None;
        }
        let mut e: f64 = 0.0;
        let mut any = false;
        for p in self.primitives.iter().filter(|p| p.is_bounded()) {
            if let Some((lo, hi)) = p.bbox() {
                e = e.max(lo.norm()).max(hi.norm());
                any = true;
            }
        }
        any.then_some(e.max(10.0))
    }

    /// About `resolution` boundary points, spread over the curves by length.
    pub fn boundary_samples(&self) -> Vec<Complex64> {
        sample_curves(&self.boundary_curves(), self.resolution)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| SrgError::Serialization(e.to_string()))
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| SrgError::Serialization(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| SrgError::Serialization(e.to_string()))
    }
}

/// Sample `total` points over `curves`, proportionally to length with at
/// least two points per curve.
pub fn sample_curves(curves: &[Curve], total: usize) -> Vec<Complex64> {
    let lengths: Vec<f64> = curves.iter().map(|c| c.length()).collect();
    let sum: f64 = lengths.iter().sum();
    let mut out = Vec::new();
    for (c, l) in curves.iter().zip(&lengths) {
        if *l == 0.0 {
            out.push(c.start());
            continue;
        }
        let n = if sum > 0.0 {
            ((total as f64) * l / sum).ceil() as usize
        } else {
            2
        };
        out.extend(c.sample(n.max(2)));
    }
    out
}
