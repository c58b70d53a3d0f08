use std::f64::consts::PI;

use srgkit::geom::point::fold_upper;
use srgkit::sim::*;
use srgkit::srg::{cascade_srg, lti_srg};
use srgkit::{parse_tf, FreqGrid, Region};

fn lti(s: &str) -> OperatorSpec {
    OperatorSpec::Lti { tf: TfSpec::Expr(s.into()) }
}

#[test]
fn elbow_sweep_lies_on_the_circle() {
    let sat = OperatorSpec::Static { map: StaticMap::Saturation { limit: 1.0 } };
    for k in 0..=16 {
        let tau = k as f64 / 16.0;
        let (u1, u2) = elbow_probe(1.0, 0.25, tau, DEFAULT_DT, 1.0);
        let y1 = apply_operator(&sat, &u1).unwrap();
        let y2 = apply_operator(&sat, &u2).unwrap();
        let z = z_point(&u1, &u2, &y1, &y2).unwrap().unwrap();
        // gain = cos θ = sqrt(1 - τ)
        assert!((z.gain - (1.0 - tau).sqrt()).abs() < 1e-12);
        if !z.degenerate {
            assert!((z.angle.cos() - z.gain).abs() < 1e-12);
        }
        assert!(((z.to_complex() - 0.5).norm() - 0.5).abs() < 1e-9);
    }
}

#[test]
fn level_probe_scales_the_circle() {
    let sat = OperatorSpec::Static { map: StaticMap::Saturation { limit: 1.0 } };
    let m = 4.0;
    let (u1, u2) = level_probe(1.0, m, 0.25, DEFAULT_DT, 1.0);
    let y1 = apply_operator(&sat, &u1).unwrap();
    let y2 = apply_operator(&sat, &u2).unwrap();
    let z = z_point(&u1, &u2, &y1, &y2).unwrap().unwrap();
    let beta = 1.0 / m;
    assert!(((z.to_complex() - beta / 2.0).norm() - beta / 2.0).abs() < 1e-12);
}

#[test]
fn sinusoids_recover_the_nyquist_curve() {
    let tf = parse_tf("1/(s+1)").unwrap();
    let op = lti("1/(s+1)");
    let omegas = vec![0.0, 1.0, 10.0];
    let mut errs = Vec::new();
    for horizon in [200.0, 400.0] {
        let cfg = SinusoidConfig { omegas: omegas.clone(), horizon, amplitude: 1.0, bias: 0.0 };
        let pts = sample_srg(&op, &Strategy::SinusoidPairs(cfg), 3, &SimSettings::default()).unwrap();
        let e = pts
            .iter()
            .zip(&omegas)
            .map(|(p, w)| (p.to_complex() - fold_upper(tf.eval(*w).unwrap().conj())).norm())
            .fold(0.0, f64::max);
        assert!(e < 2e-2, "horizon {horizon}: {e}");
        errs.push(e);
    }
    assert!(errs[1] < errs[0]);
}

#[test]
fn delay_gains_are_one() {
    let st = Strategy::RandomPc(RandomConfig::default());
    let pts = sample_srg(&OperatorSpec::Delay { t: 0.5 }, &st, 50, &SimSettings::default()).unwrap();
    assert!(pts.iter().all(|p| (p.gain - 1.0).abs() < 1e-9));
}

#[test]
fn parallel_runs_are_reproducible() {
    let st = Strategy::RandomPc(RandomConfig::default());
    let s = SimSettings { dt: DEFAULT_DT, seed: 42 };
    let a = sample_srg(&lti("1/(s+2)"), &st, 40, &s).unwrap();
    let b = sample_srg(&lti("1/(s+2)"), &st, 40, &s).unwrap();
    assert_eq!(a, b);
    let first: Vec<ZPoint> = (0..40)
        .map(|i| {
            let (u1, u2) = probe_pair(&st, &s, i);
            let op = lti("1/(s+2)");
            let y1 = apply_operator_with(&op, &u1, OutputMode::Average).unwrap();
            let y2 = apply_operator_with(&op, &u2, OutputMode::Average).unwrap();
            z_point(&u1, &u2, &y1, &y2).unwrap().unwrap()
        })
        .collect();
    assert_eq!(a, first);
}

#[test]
fn lag_cascade_cloud_in_cascade_region() {
    // 2/(s+2) is 1-output-strict like 1/(s+1).
    let op = OperatorSpec::Cascade { ops: vec![lti("1/(s+1)"), lti("2/(s+2)"), lti("1/(s+1)")] };
    let st = Strategy::RandomPc(RandomConfig::default());
    let pts = sample_srg(&op, &st, 100, &SimSettings::default()).unwrap();
    let rep = check_inclusion(&pts, &cascade_srg(&[1.0, 1.0, 1.0]).unwrap(), 2e-2).unwrap();
    assert!(rep.pass, "{:?}", rep.violations.first());
}

#[test]
fn lti_cloud_in_lti_hull() {
    let tf = parse_tf("(s+3)/(s^2+s+2)").unwrap();
    let region = lti_srg(&tf, &FreqGrid::default()).unwrap();
    let op = lti("(s+3)/(s^2+s+2)");
    let settings = SimSettings::default();
    let pts = sample_srg(&op, &Strategy::RandomPc(RandomConfig::default()), 100, &settings).unwrap();
    assert!(check_inclusion(&pts, &region, 2e-2).unwrap().pass);
    let u_star = Signal::from_fn(DEFAULT_DT, 20.0, |t| (0.7 * t).sin());
    let sg = sample_sg(&op, &u_star, &Strategy::RandomPc(RandomConfig::default()), 50, &settings).unwrap();
    assert!(check_inclusion(&sg, &region, 2e-2).unwrap().pass);
}

#[test]
fn scaled_graph_of_negative_resistor() {
    let op = OperatorSpec::Static { map: negative_resistor_table() };
    let st = Strategy::RandomPc(RandomConfig { hold: 0.25, active: 5.0, horizon: 5.0, amplitude: 2.0 });
    let settings = SimSettings::default();
    let rhp = Region::re_at_least(0.0);
    let about = |c: f64| sample_sg(&op, &Signal::constant(DEFAULT_DT, 5.0, c), &st, 200, &settings).unwrap();
    let positive = check_inclusion(&about(2.0), &rhp, 1e-12).unwrap();
    assert!(positive.pass);
    let negative = check_inclusion(&about(0.0), &rhp, 1e-12).unwrap();
    assert!(!negative.pass);
    let eq = sample_sg_equilibria(&op, &[-2.5, 2.0, 2.5], 5.0, &st, 50, &settings).unwrap();
    assert_eq!(eq.len(), 150);
    assert!(check_inclusion(&eq, &rhp, 1e-12).unwrap().pass);
}

#[test]
fn sg_about_probe_input_is_z_point() {
    let op = OperatorSpec::Static { map: StaticMap::Relu };
    let st = Strategy::RandomPc(RandomConfig::default());
    let settings = SimSettings::default();
    let (u1, u2) = probe_pair(&st, &settings, 0);
    let sg = sample_sg(&op, &u1, &st, 1, &settings).unwrap();
    let y1 = apply_operator(&op, &u1).unwrap();
    let y2 = apply_operator(&op, &u2).unwrap();
    let z = z_point(&u2, &u1, &y2, &y1).unwrap().unwrap();
    assert!((sg[0].gain - z.gain).abs() < 1e-12 && (sg[0].angle - z.angle).abs() < 1e-9);
    assert!(sg[0].angle <= PI / 2.0 + 1e-12);
}
