use std::f64::consts::PI;

use proptest::prelude::*;
use srgkit::feedback::{nyquist_stability, robust_feedback, tau_grid};
use srgkit::geom::point::fold_upper;
use srgkit::geom::{
    bk_map, bk_unmap, h_convex_hull, minkowski_sum, mobius_invert, region_distance, region_invert, region_product,
    region_shift, ExtPoint,
};
use srgkit::srg::{cascade_srg, class_srg, lti_srg, nyquist_curve, OperatorClass};
use srgkit::transferfn::eval_tf;
use srgkit::{parse_tf, Complex64, FreqGrid, Region, TransferFunction};

fn cpx() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -PI..PI).prop_map(|(l, a)| Complex64::from_polar(l.exp(), a))
}

fn upper() -> impl Strategy<Value = Complex64> {
    (-5.0..5.0f64, 0.0..5.0f64).prop_map(|(x, y)| Complex64::new(x, y))
}

fn disc() -> impl Strategy<Value = (f64, f64)> {
    (-2.0..2.0f64, 0.01..2.0f64)
}

/// A point of the disc `D(c, r)` from unit-square coordinates.
fn in_disc(c: f64, r: f64, s: f64, a: f64) -> Complex64 {
    Complex64::new(c, 0.0) + Complex64::from_polar(r * s.sqrt(), a)
}

fn hausdorff_samples(a: &Region, b: &Region) -> f64 {
    let one = |x: &Region, y: &Region| x.boundary_samples().iter().map(|&z| y.point_distance(z)).fold(0.0, f64::max);
    one(a, b).max(one(b, a))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mobius_is_an_involution(z in cpx()) {
        let back = mobius_invert(mobius_invert(ExtPoint::Finite(z))).finite().unwrap();
        prop_assert!((back - z).norm() <= 1e-12 * z.norm());
    }

    #[test]
    fn klein_round_trip(z in upper()) {
        let w = bk_map(z).unwrap();
        prop_assert!(w.norm() <= 1.0 + 1e-12);
        prop_assert!((bk_unmap(w).unwrap() - z).norm() <= 1e-12 * (1.0 + z.norm()));
    }

    #[test]
    fn hull_is_idempotent(pts in prop::collection::vec(upper(), 3..12)) {
        let h = h_convex_hull(&pts).unwrap();
        for p in &pts {
            prop_assert!(h.contains(*p) || h.point_distance(*p) <= 1e-9);
        }
        let again: Vec<Complex64> = h.boundary_samples().into_iter().map(fold_upper).collect();
        let h2 = h_convex_hull(&again).unwrap();
        prop_assert!(hausdorff_samples(&h, &h2) <= 1e-6);
    }

    #[test]
    fn sums_and_products_are_sound(
        (c1, r1) in disc(), (c2, r2) in disc(),
        s1 in 0.0..1.0f64, a1 in -PI..PI, s2 in 0.0..1.0f64, a2 in -PI..PI,
    ) {
        let (a, b) = (Region::disc(c1, r1), Region::disc(c2, r2));
        let (za, zb) = (in_disc(c1, r1, s1, a1), in_disc(c2, r2, s2, a2));
        let sum = minkowski_sum(&a, &b).unwrap();
        prop_assert!(sum.contains(za + zb) || sum.point_distance(za + zb) <= 1e-9);
        // Product soundness needs the arc property, which right-half-plane
        // discs through the origin have.
        let (p, q) = (Region::disc(r1, r1), Region::disc(r2, r2));
        let (zp, zq) = (in_disc(r1, r1, s1, a1), in_disc(r2, r2, s2, a2));
        let prod = region_product(&p, &q).unwrap();
        prop_assert!(prod.contains(zp * zq) || prod.point_distance(zp * zq) <= 1e-9 * (1.0 + r1 * r2));
    }

    #[test]
    fn distance_is_symmetric((c1, r1) in disc(), (c2, r2) in disc(), off in -3.0..3.0f64) {
        let regions = [Region::disc(c1, r1), Region::disc(c2, r2), Region::re_at_least(off), cascade_srg(&[r1, r2]).unwrap()];
        for a in &regions {
            for b in &regions {
                prop_assert_eq!(region_distance(a, b).unwrap(), region_distance(b, a).unwrap());
            }
        }
    }

    #[test]
    fn inverse_modulus_bounded_by_distance((c, r) in disc()) {
        let a = Region::disc(c, r);
        let d = region_distance(&a, &Region::point(0.0)).unwrap();
        prop_assume!(d > 1e-3);
        let inv = region_invert(&a);
        prop_assert!(inv.max_modulus() <= (1.0 / d) * (1.0 + 1e-9));
    }

    #[test]
    fn frequency_response_is_conjugate_symmetric(a in 0.1..5.0f64, b in -5.0..5.0f64, w in 0.0..100.0f64, t in 0.0..2.0f64) {
        let tf = TransferFunction::new(vec![1.0, b], vec![1.0, a, 1.0], t).unwrap();
        let p = eval_tf(&tf, w).unwrap();
        let m = eval_tf(&tf, -w).unwrap();
        prop_assert!((p.conj() - m).norm() <= 1e-12 * (1.0 + p.norm()));
        let d = TransferFunction::pure_delay(t).unwrap();
        prop_assert!((eval_tf(&d, w).unwrap().norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn parse_print_round_trip(
        num in prop::collection::vec(-9i32..9, 1..4),
        den in prop::collection::vec(-9i32..9, 1..4),
        t in 0u32..8,
    ) {
        prop_assume!(den[0] != 0);
        let mut den: Vec<f64> = den.iter().map(|v| *v as f64).collect();
        den.push(1.0);
        let tf = TransferFunction::new(num.iter().map(|v| *v as f64).collect(), den, t as f64 / 4.0).unwrap();
        let again = parse_tf(&tf.to_string()).unwrap();
        prop_assert_eq!(&again, &tf);
        prop_assert_eq!(parse_tf(&again.to_string()).unwrap(), again);
    }

    #[test]
    fn lti_srg_covers_nyquist_and_passivity(a in 0.2..5.0f64, b in 0.2..5.0f64) {
        let tf = TransferFunction::new(vec![1.0, b], vec![1.0, a], 0.0).unwrap();
        let grid = FreqGrid::default();
        let r = lti_srg(&tf, &grid).unwrap();
        let curve = nyquist_curve(&tf, &grid).unwrap();
        let peak = curve.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for z in &curve {
            prop_assert!(r.contains(*z) || r.point_distance(*z) <= 1e-9);
        }
        prop_assert!(r.boundary_samples().iter().all(|z| z.re >= -1e-9));
        prop_assert!((r.max_modulus() - peak).abs() <= 1e-9 * (1.0 + peak));
    }

    #[test]
    fn cascade_products_are_inside(
        gammas in prop::collection::vec(0.2..3.0f64, 2..6),
        thetas in prop::collection::vec(-PI / 2.0..PI / 2.0, 6),
    ) {
        let r = cascade_srg(&gammas).unwrap();
        let z = gammas.iter().zip(&thetas).fold(Complex64::new(1.0, 0.0), |z, (g, th)| z * Complex64::from_polar(g * th.cos(), -th));
        prop_assert!(r.contains(z) || r.point_distance(z) <= 1e-9);
    }

    #[test]
    fn sector_is_shifted_output_strict(mu in -3.0..3.0f64, width in 0.05..4.0f64, z in cpx()) {
        let lambda = mu + width;
        let sector = class_srg(OperatorClass::Sector { mu, lambda }).unwrap();
        let shifted = region_shift(&class_srg(OperatorClass::OutputStrict { gamma: 1.0 / width }).unwrap(), mu);
        let near_edge = sector.point_distance(z).max(shifted.point_distance(z)) <= 1e-9
            || sector.signed_distance(z).abs() <= 1e-9;
        prop_assert!(near_edge || sector.contains(z) == shifted.contains(z));
    }

    #[test]
    fn tau_trace_is_lipschitz((c1, r1) in (0.5..3.0f64, 0.1..0.4f64), (c2, r2) in (-1.0..1.0f64, 0.1..1.0f64)) {
        let h1 = Region::disc(c1, r1.min(c1 * 0.9));
        let h2 = Region::disc(c2, r2);
        let v = robust_feedback(&h1, &h2, &tau_grid(32)).unwrap();
        let m = c2.abs() + r2;
        for w in v.tau_trace.windows(2) {
            prop_assert!((w[1].1 - w[0].1).abs() <= m * (w[1].0 - w[0].0) + 1e-9);
        }
        if v.stable {
            prop_assert_eq!(v.gain_bound, 1.0 / v.margin);
        }
    }

    #[test]
    fn unit_feedback_matches_nyquist((c, r) in (0.0..2.0f64, 0.1..1.5f64)) {
        let l = Region::disc(c, r);
        let taus = tau_grid(32);
        let a = nyquist_stability(&l, &taus).unwrap();
        let b = robust_feedback(&l, &Region::point(1.0), &taus).unwrap();
        prop_assert_eq!(a.stable, b.stable);
    }
}
