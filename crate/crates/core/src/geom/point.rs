//! Points of the extended complex plane and the inversion map.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A point of the extended plane. SRG points are finite except for the
/// distinguished point at infinity produced by multivalued relations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtPoint {
    Finite(Complex64),
    Infinity,
}

impl ExtPoint {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            ExtPoint::Finite(z) => Some(z),
            ExtPoint::Infinity => None,
        }
    }
}

impl From<Complex64> for ExtPoint {
    fn from(z: Complex64) -> Self {
        ExtPoint::Finite(z)
    }
}

/// Inversion in the unit circle, `r e^{jθ} ↦ (1/r) e^{jθ}`. Exchanges 0 and ∞.
pub fn mobius_invert(z: ExtPoint) -> ExtPoint {
    match z {
        ExtPoint::Infinity => ExtPoint::Finite(Complex64::new(0.0, 0.0)),
        ExtPoint::Finite(w) if w.re == 0.0 && w.im == 0.0 => ExtPoint::Infinity,
        ExtPoint::Finite(w) => ExtPoint::Finite(invert(w)),
    }
}

/// Finite-point inversion `z / |z|^2`. Returns non-finite values for `z = 0`.
#[inline]
pub fn invert(z: Complex64) -> Complex64 {
    let n = z.norm_sqr();
    Complex64::new(z.re / n, z.im / n)
}

/// Representative of `{z, conj z}` in the closed upper half-plane.
#[inline]
pub fn fold_upper(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        z.conj()
    } else {
        z
    }
}

#[inline]
pub fn dot(a: Complex64, b: Complex64) -> f64 {
    a.re * b.re + a.im * b.im
}

#[inline]
pub fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Angle wrapped to `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    use std::f64::consts::PI;
    let mut x = a % (2.0 * PI);
    if x <= -PI {
        x += 2.0 * PI;
    } else if x > PI {
        x -= 2.0 * PI;
    }
    x
}
