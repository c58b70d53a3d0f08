//! SRG builders: operator classes, static nonlinearities, LTI systems via the
//! h-convex hull of the Nyquist curve, and cascades of output-strict systems.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SrgError};
use crate::geom::{h_convex_hull, h_convex_hull_exact, Primitive, Region};
use crate::transferfn::{frequency_response, FreqGrid, TransferFunction};

/// Incremental operator classes with SRG-full characterizations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorClass {
    GainBound { mu: f64 },
    IncrementallyPositive,
    InputStrict { lambda: f64 },
    OutputStrict { gamma: f64 },
    Sector { mu: f64, lambda: f64 },
}

impl OperatorClass {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SrgError::InvalidParameter(m));
        match *self {
            OperatorClass::GainBound { mu } if !(mu > 0.0 && mu.is_finite()) => {
                bad(format!("gain bound needs mu > 0, got {mu}"))
            }
            OperatorClass::InputStrict { lambda } if !lambda.is_finite() => {
                bad(format!("input strictness must be finite, got {lambda}"))
            }
            OperatorClass::OutputStrict { gamma } if !(gamma > 0.0 && gamma.is_finite()) => {
                bad(format!("output strictness needs gamma > 0, got {gamma}"))
            }
            OperatorClass::Sector { mu, lambda } if !(mu <= lambda && mu.is_finite() && lambda.is_finite()) => {
                bad(format!("sector needs mu <= lambda, got [{mu}, {lambda}]"))
            }
            _ => Ok(()),
        }
    }
}

pub fn class_srg(c: OperatorClass) -> Result<Region> {
    c.validate()?;
    Ok(match c {
        OperatorClass::GainBound { mu } => Region::disc(0.0, mu),
        OperatorClass::IncrementallyPositive => Region::re_at_least(0.0).with_infinity(true),
        OperatorClass::InputStrict { lambda } => Region::re_at_least(lambda).with_infinity(true),
        OperatorClass::OutputStrict { gamma } => Region::disc(0.5 / gamma, 0.5 / gamma),
        OperatorClass::Sector { mu, lambda } => Region::disc(0.5 * (mu + lambda), 0.5 * (lambda - mu)),
    })
}

/// Upper half-plane representatives of `G(jω)`, `ω ≥ 0`, ordered by `ω`.
pub fn nyquist_curve(tf: &TransferFunction, grid: &FreqGrid) -> Result<Vec<Complex64>> {
    tf.require_hurwitz()?;
    Ok(frequency_response(tf, grid)?
        .into_iter()
        .map(|s| Complex64::new(s.value.re, s.value.im.abs()))
        .collect())
}

fn hull_region(tf: &TransferFunction, grid: &FreqGrid, filled: bool) -> Result<Region> {
    if grid.points < 256 {
        return Err(SrgError::InvalidParameter(format!("LTI SRG needs at least 256 grid points, got {}", grid.points)));
    }
    let pts = nyquist_curve(tf, grid)?;
    if pts.iter().all(|z| *z == pts[0]) && pts[0].im == 0.0 {
        return Ok(Region::point(pts[0].re));
    }
    let r = if filled { h_convex_hull(&pts)? } else { h_convex_hull_exact(&pts)? };
    Ok(r.with_infinity(!tf.is_proper()))
}

/// SRG of a stable LTI system: the h-convex hull of its Nyquist samples with
/// holes filled, an outer bound of the exact hull.
pub fn lti_srg(tf: &TransferFunction, grid: &FreqGrid) -> Result<Region> {
    hull_region(tf, grid, true)
}

/// The h-convex hull of the Nyquist samples without filling.
pub fn lti_srg_exact(tf: &TransferFunction, grid: &FreqGrid) -> Result<Region> {
    hull_region(tf, grid, false)
}

/// Static nonlinearities with known SRG bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StaticKind {
    /// Piecewise-linear elbow with slopes 0 and 1: the circle `|z − 1/2| = 1/2` lies in the SRG.
    ElbowCircle,
    /// Saturating map with `s(u*)` at the knee `u*`.
    SaturatingDisc { u_star: f64, s_u_star: f64 },
    Saturation,
    Relu,
}

pub fn static_srg(kind: StaticKind) -> Result<Region> {
    match kind {
        StaticKind::ElbowCircle => Ok(Region::from_primitive(Primitive::Circle {
            center: Complex64::new(0.5, 0.0),
            radius: 0.5,
        })),
        StaticKind::SaturatingDisc { u_star, s_u_star } => {
            if !(u_star > 0.0 && s_u_star > 0.0 && u_star.is_finite() && s_u_star.is_finite()) {
                return Err(SrgError::InvalidParameter(format!(
                    "saturating disc needs u* > 0 and s(u*) > 0, got ({u_star}, {s_u_star})"
                )));
            }
            let c = s_u_star / (2.0 * u_star);
            Ok(Region::disc(c, c))
        }
        StaticKind::Saturation | StaticKind::Relu => static_srg(StaticKind::SaturatingDisc { u_star: 1.0, s_u_star: 1.0 }),
    }
}

/// Bound for a cascade of output-strict incrementally positive systems; the
/// boundary is `Πγ (cos(φ/n))^n e^{-jφ}`.
pub fn cascade_srg(gammas: &[f64]) -> Result<Region> {
    if gammas.is_empty() {
        return Err(SrgError::InvalidParameter("cascade needs at least one gain".into()));
    }
    if let Some(g) = gammas.iter().find(|g| !(**g > 0.0 && g.is_finite())) {
        return Err(SrgError::InvalidParameter(format!("cascade gains must be positive, got {g}")));
    }
    if gammas.len() == 1 {
        return Ok(Region::disc(0.5 * gammas[0], 0.5 * gammas[0]));
    }
    Ok(Region::from_primitive(Primitive::Cascade { gammas: gammas.to_vec() }))
}

/// Boundary point of the cascade region at angle `φ`.
pub fn cascade_boundary_point(gammas: &[f64], phi: f64) -> Complex64 {
    let n = gammas.len() as i32;
    let p: f64 = gammas.iter().product();
    Complex64::from_polar(p * (phi / n as f64).cos().powi(n), -phi)
}

/// Bound for `ẏ = −f(y) + g(u)` with `f` in the sector `[0, γ1]` and `g` in
/// `[0, γ2]`: the two-stage cascade region with gains `γ1, γ2`.
pub fn first_order_nl_srg(gamma1: f64, gamma2: f64) -> Result<Region> {
    cascade_srg(&[gamma1, gamma2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::region_distance;
    use crate::transferfn::parse_tf;
    use std::f64::consts::PI;

    fn disc_of(r: &Region) -> (Complex64, f64) {
        match &r.primitives[0] {
            Primitive::Disc { center, radius } => (*center, *radius),
            p => panic!("{p:?}"),
        }
    }

    #[test]
    fn class_examples() {
        assert_eq!(disc_of(&class_srg(OperatorClass::Sector { mu: 0.0, lambda: 1.0 }).unwrap()).1, 0.5);
        assert_eq!(disc_of(&class_srg(OperatorClass::OutputStrict { gamma: 1.0 }).unwrap()).0.re, 0.5);
        assert_eq!(disc_of(&class_srg(OperatorClass::GainBound { mu: 2.0 }).unwrap()), (Complex64::new(0.0, 0.0), 2.0));
        assert!(class_srg(OperatorClass::Sector { mu: 1.0, lambda: 0.0 }).is_err());
        assert!(class_srg(OperatorClass::OutputStrict { gamma: 0.0 }).is_err());
        let ip = class_srg(OperatorClass::InputStrict { lambda: 0.5 }).unwrap();
        assert!(ip.includes_infinity && ip.contains(Complex64::new(0.5, 9.0)));
    }

    #[test]
    fn static_examples() {
        assert_eq!(disc_of(&static_srg(StaticKind::Saturation).unwrap()), (Complex64::new(0.5, 0.0), 0.5));
        assert_eq!(disc_of(&static_srg(StaticKind::Relu).unwrap()), (Complex64::new(0.5, 0.0), 0.5));
        let d = disc_of(&static_srg(StaticKind::SaturatingDisc { u_star: 2.0, s_u_star: 1.0 }).unwrap());
        assert_eq!(d, (Complex64::new(0.25, 0.0), 0.25));
        let e = static_srg(StaticKind::ElbowCircle).unwrap();
        assert!(e.contains(Complex64::new(0.5, 0.5)) && !e.contains(Complex64::new(0.5, 0.0)));
    }

    #[test]
    fn nyquist_of_first_order_lag_is_on_circle() {
        let tf = parse_tf("1/(s+1)").unwrap();
        for z in nyquist_curve(&tf, &FreqGrid::default()).unwrap() {
            assert!(((z - 0.5).norm() - 0.5).abs() < 1e-12);
            assert!(z.im >= 0.0);
        }
        assert!(nyquist_curve(&parse_tf("1/(s-1)").unwrap(), &FreqGrid::default()).is_err());
    }

    #[test]
    fn lti_hull_examples() {
        let r = lti_srg(&parse_tf("1/(s+1)").unwrap(), &FreqGrid::default()).unwrap();
        assert!(r.contains(Complex64::new(0.5, 0.0)));
        assert!((region_distance(&r, &Region::point(-1.0)).unwrap() - 1.0).abs() < 1e-6);
        let k = lti_srg(&TransferFunction::gain(2.5), &FreqGrid::default()).unwrap();
        assert_eq!(disc_of(&k), (Complex64::new(2.5, 0.0), 0.0));
    }

    #[test]
    fn cascade_examples() {
        let one = cascade_srg(&[1.0]).unwrap();
        assert_eq!(disc_of(&one), (Complex64::new(0.5, 0.0), 0.5));
        assert!((cascade_boundary_point(&[1.0; 3], PI) - Complex64::new(-0.125, 0.0)).norm() < 1e-15);
        assert!(cascade_boundary_point(&[1.0; 2], PI).norm() < 1e-15);
        let two = first_order_nl_srg(2.0, 1.0).unwrap();
        assert!(two.contains(Complex64::new(2.0, 0.0)) && !two.contains(Complex64::new(2.01, 0.0)));
        assert!(cascade_srg(&[1.0, -1.0]).is_err());
    }
}
