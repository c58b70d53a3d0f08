//! Boundary curves: straight segments, circular arcs and general parametric
//! curves, with sampling and one-dimensional refinement on the curve parameter.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::point::dot;

type CurveFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A parametric curve restricted to `[t0, t1]`; evaluated through `point(s)`
/// with `s ∈ [0, 1]`.
#[derive(Clone)]
pub struct ParamCurve {
    f: CurveFn,
    t0: f64,
    t1: f64,
}

impl ParamCurve {
    pub fn new(f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            t0: 0.0,
            t1: 1.0,
        }
    }
}

/// A boundary piece. Segments and arcs have closed-form distance and support
/// computations; parametric curves are sampled and refined.
#[derive(Clone)]
pub enum Curve {
    Segment { a: Complex64, b: Complex64 },
    /// Points `center + radius e^{jθ}` for `θ ∈ [start, start + sweep]`, `sweep ≥ 0`.
    Arc { center: Complex64, radius: f64, start: f64, sweep: f64 },
    Param(ParamCurve),
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Curve::Segment { a, b } => write!(f, "Segment({a}, {b})"),
            Curve::Arc { center, radius, start, sweep } => {
                write!(f, "Arc(c={center}, r={radius}, {start}..+{sweep})")
            }
            Curve::Param(p) => write!(f, "Param({}..{})", p.t0, p.t1),
        }
    }
}

const GOLDEN_ITERS: usize = 64;

impl Curve {
    pub fn point_curve(z: Complex64) -> Self {
        Curve::Segment { a: z, b: z }
    }

    pub fn param(f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        Curve::Param(ParamCurve::new(f))
    }

    /// Full circle as an arc.
    pub fn circle(center: Complex64, radius: f64) -> Self {
        Curve::Arc { center, radius, start: -PI, sweep: 2.0 * PI }
    }

    /// Evaluate at `s ∈ [0, 1]`.
    pub fn point(&self, s: f64) -> Complex64 {
        match self {
            Curve::Segment { a, b } => a + (b - a) * s,
            Curve::Arc { center, radius, start, sweep } => {
                center + Complex64::from_polar(*radius, start + sweep * s)
            }
            Curve::Param(p) => (p.f)(p.t0 + (p.t1 - p.t0) * s),
        }
    }

    pub fn start(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.point(1.0)
    }

    pub fn length(&self) -> f64 {
        match self {
            Curve::Segment { a, b } => (b - a).norm(),
            Curve::Arc { radius, sweep, .. } => radius * sweep,
            Curve::Param(_) => {
                let pts = self.sample(64);
                pts.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
            }
        }
    }

    /// `n ≥ 2` evenly spaced parameter samples, endpoints included.
    pub fn sample(&self, n: usize) -> Vec<Complex64> {
        let n = n.max(2);
        (0..n)
            .map(|i| self.point(i as f64 / (n - 1) as f64))
            .collect()
    }

    /// Sub-curve over `[s0, s1] ⊆ [0, 1]`.
    pub fn sub(&self, s0: f64, s1: f64) -> Curve {
        match self {
            Curve::Segment { .. } => Curve::Segment { a: self.point(s0), b: self.point(s1) },
            Curve::Arc { center, radius, start, sweep } => Curve::Arc {
                center: *center,
                radius: *radius,
                start: start + sweep * s0,
                sweep: sweep * (s1 - s0),
            },
            Curve::Param(p) => {
                let span = p.t1 - p.t0;
                Curve::Param(ParamCurve {
                    f: p.f.clone(),
                    t0: p.t0 + span * s0,
                    t1: p.t0 + span * s1,
                })
            }
        }
    }

    /// Image of the curve under `g`. Segments and arcs become parametric.
    pub fn map(&self, g: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> Curve {
        let inner = self.clone();
        Curve::param(move |s| g(inner.point(s)))
    }

    /// Complex conjugate of the curve (stays exact for segments and arcs).
    pub fn conj(&self) -> Curve {
        match self {
            Curve::Segment { a, b } => Curve::Segment { a: a.conj(), b: b.conj() },
            Curve::Arc { center, radius, start, sweep } => Curve::Arc {
                center: center.conj(),
                radius: *radius,
                start: -(start + sweep),
                sweep: *sweep,
            },
            Curve::Param(_) => self.map(|z| z.conj()),
        }
    }

    /// Image under `z ↦ scale·z + shift`, exact for segments and arcs.
    pub fn affine(&self, scale: f64, shift: Complex64) -> Curve {
        match self {
            Curve::Segment { a, b } => Curve::Segment { a: a * scale + shift, b: b * scale + shift },
            Curve::Arc { center, radius, start, sweep } => {
                let rot = if scale < 0.0 { PI } else { 0.0 };
                Curve::Arc {
                    center: center * scale + shift,
                    radius: radius * scale.abs(),
                    start: start + rot,
                    sweep: *sweep,
                }
            }
            Curve::Param(_) => self.map(move |z| z * scale + shift),
        }
    }

    /// Euclidean distance from `p` to the curve and the parameter of the
    /// nearest point.
    pub fn distance_to(&self, p: Complex64) -> (f64, f64) {
        match self {
            Curve::Segment { a, b } => {
                let d = b - a;
                let l2 = d.norm_sqr();
                if l2 == 0.0 {
                    return ((p - a).norm(), 0.0);
                }
                let s = (dot(p - a, d) / l2).clamp(0.0, 1.0);
                ((p - (a + d * s)).norm(), s)
            }
            Curve::Arc { center, radius, start, sweep } => {
                let q = p - center;
                if q.norm() > 0.0 {
                    let rel = angle_offset(q.arg(), *start);
                    if rel <= *sweep {
                        let s = if *sweep > 0.0 { rel / sweep } else { 0.0 };
                        return ((q.norm() - radius).abs(), s);
                    }
                }
                let d0 = (p - self.start()).norm();
                let d1 = (p - self.end()).norm();
                if d0 <= d1 {
                    (d0, 0.0)
                } else {
                    (d1, 1.0)
                }
            }
            Curve::Param(_) => {
                let (v, s, _) = self.minimize(|z| (z - p).norm(), 257);
                (v, s)
            }
        }
    }

    /// `sup ⟨z, n⟩` over the curve for a direction `n`.
    pub fn support(&self, n: Complex64) -> f64 {
        match self {
            Curve::Segment { a, b } => dot(*a, n).max(dot(*b, n)),
            Curve::Arc { center, radius, start, sweep } => {
                let rel = angle_offset(n.arg(), *start);
                let base = dot(*center, n);
                if rel <= *sweep && n.norm() > 0.0 {
                    base + radius * n.norm()
                } else {
                    dot(self.start(), n).max(dot(self.end(), n))
                }
            }
            Curve::Param(_) => -self.minimize(|z| -dot(z, n), 257).0,
        }
    }

    /// Minimise `f` along the curve: sample `n` points, then golden-section
    /// refinement around the best few local minima. Returns
    /// `(value, parameter, point)`.
    pub fn minimize(&self, f: impl Fn(Complex64) -> f64, n: usize) -> (f64, f64, Complex64) {
        let n = n.max(3);
        let vals: Vec<f64> = (0..n)
            .map(|i| {
                let v = f(self.point(i as f64 / (n - 1) as f64));
                if v.is_nan() {
                    f64::INFINITY
                } else {
                    v
                }
            })
            .collect();
        let mut candidates: Vec<usize> = (0..n)
            .filter(|&i| {
                let left = if i == 0 { f64::INFINITY } else { vals[i - 1] };
                let right = if i + 1 == n { f64::INFINITY } else { vals[i + 1] };
                vals[i] <= left && vals[i] <= right
            })
            .collect();
        candidates.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        candidates.truncate(4);
        let h = 1.0 / (n - 1) as f64;
        let mut best = (f64::INFINITY, 0.0, self.point(0.0));
        for i in candidates {
            let s_i = i as f64 * h;
            if vals[i] < best.0 {
                best = (vals[i], s_i, self.point(s_i));
            }
            let lo = (s_i - h).max(0.0);
            let hi = (s_i + h).min(1.0);
            let (s, v) = golden_min(|s| f(self.point(s)), lo, hi);
            if v < best.0 {
                best = (v, s, self.point(s));
            }
        }
        best
    }
}

/// Offset of angle `a` from `start` wrapped into `[0, 2π)`.
fn angle_offset(a: f64, start: f64) -> f64 {
    let mut r = (a - start) % (2.0 * PI);
    if r < 0.0 {
        r += 2.0 * PI;
    }
    // Angles just below `start` are reported near 2π; fold the rounding back.
    if 2.0 * PI - r < 1e-14 {
        r = 0.0;
    }
    r
}

/// Golden-section search for the minimum of `f` on `[lo, hi]`.
pub fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..GOLDEN_ITERS {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Bisection for the transition of a predicate between `s_in` (true) and
/// `s_out` (false). Returns the last parameter known to satisfy it.
pub fn bisect_boundary(pred: impl Fn(f64) -> bool, mut s_in: f64, mut s_out: f64) -> f64 {
    for _ in 0..60 {
        let mid = 0.5 * (s_in + s_out);
        if pred(mid) {
            s_in = mid;
        } else {
            s_out = mid;
        }
        if (s_in - s_out).abs() < 1e-16 {
            break;
        }
    }
    s_in
}
