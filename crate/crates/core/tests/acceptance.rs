//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use srgkit::feedback::{
    cos_pi_n_pow_n, delay_beta_bound, nyquist_stability, robust_feedback, secant_check, small_gain_bound, tau_grid,
    uncertain_gain_interval, weak_passivity_region,
};
use srgkit::geom::{bk_map, bk_unmap, mobius_invert, ExtPoint};
use srgkit::sim::{
    check_inclusion, elbow_probe, sample_srg, z_point, apply_operator, OperatorSpec, RandomConfig, SimSettings,
    SinusoidConfig, SquareWaveConfig, StaticMap, Strategy, TfSpec,
};
use srgkit::srg::{cascade_boundary_point, cascade_srg, class_srg, first_order_nl_srg, lti_srg, OperatorClass};
use srgkit::{parse_tf, Complex64, FreqGrid, Primitive, Region};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let tf = parse_tf("1/(s+1)").map_err(|e| e.to_string())?;
    let r = lti_srg(&tf, &FreqGrid::default()).map_err(|e| e.to_string())?;
    let disc_dist = |z: Complex64| ((z - 0.5).norm() - 0.5).max(0.0);
    let a = r.boundary_samples().iter().map(|&z| disc_dist(z)).fold(0.0, f64::max);
    let b = (0..4096)
        .map(|k| Complex64::new(0.5, 0.0) + Complex64::from_polar(0.5, 2.0 * PI * k as f64 / 4096.0))
        .map(|z| r.point_distance(z))
        .fold(0.0, f64::max);
    let h = a.max(b);
    let secs = start.elapsed().as_secs_f64();
    check(h <= 1e-3 && secs < 5.0, format!("Hausdorff {h:.3e}, {secs:.2} s"))
}

fn ac2() -> Outcome {
    let start = Instant::now();
    let sat = OperatorSpec::Static { map: StaticMap::Saturation { limit: 1.0 } };
    let disc = Region::disc(0.5, 0.5);
    let settings = SimSettings::default();
    let pts = sample_srg(&sat, &Strategy::SquareWavePairs(SquareWaveConfig::default()), 10_000, &settings)
        .map_err(|e| e.to_string())?;
    let rep = check_inclusion(&pts, &disc, 1e-9).map_err(|e| e.to_string())?;
    let mut ring = 0.0f64;
    for k in 0..=16 {
        let (u1, u2) = elbow_probe(1.0, 0.25, k as f64 / 16.0, settings.dt, 1.0);
        let y1 = apply_operator(&sat, &u1).map_err(|e| e.to_string())?;
        let y2 = apply_operator(&sat, &u2).map_err(|e| e.to_string())?;
        if let Some(z) = z_point(&u1, &u2, &y1, &y2).map_err(|e| e.to_string())? {
            ring = ring.max(((z.to_complex() - 0.5).norm() - 0.5).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        pts.len() == 10_000 && rep.min_slack >= -1e-9 && ring <= 1e-6 && secs < 10.0,
        format!("{} points, min slack {:.3e}, sweep off circle {ring:.3e}, {secs:.2} s", pts.len(), rep.min_slack),
    )
}

fn ac3() -> Outcome {
    let v = robust_feedback(&Region::disc(0.0, 0.5), &Region::disc(0.0, 1.0), &tau_grid(128)).map_err(|e| e.to_string())?;
    let oracle = small_gain_bound(0.5, 1.0);
    check(
        v.stable && (v.margin - 1.0).abs() <= 1e-6 && (v.gain_bound - oracle).abs() <= 1e-6,
        format!("margin {:.9}, gain bound {:.9}, formula {oracle}", v.margin, v.gain_bound),
    )
}

fn ac4() -> Outcome {
    let mut worst = 0.0f64;
    let mut all_stable = true;
    for (lambda, mu) in [(0.5, 2.0), (1.0, 1.0), (0.1, 3.0)] {
        let h1 = Region::from_primitive(Primitive::intersection(vec![
            Primitive::disc(0.0, mu),
            Primitive::half_plane(0.0, lambda),
        ]));
        let v = robust_feedback(&h1, &Region::re_at_least(0.0), &tau_grid(128)).map_err(|e| e.to_string())?;
        all_stable &= v.stable;
        let want = mu * mu / lambda;
        worst = worst.max((v.gain_bound - want).abs() / want);
    }
    check(all_stable && worst <= 5e-3, format!("worst relative error {worst:.3e}"))
}

fn ac5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..10 {
        let (gamma, lambda) = loop {
            let g: f64 = rng.gen_range(0.05..2.0);
            let l: f64 = rng.gen_range(-1.0..2.0);
            if g + l >= 0.05 {
                break (g, l);
            }
        };
        let (r, _) = weak_passivity_region(gamma, lambda, 1e3).map_err(|e| e.to_string())?;
        let c = 0.5 / (gamma + lambda);
        let excess = r.boundary_samples().iter().map(|z| (z - c).norm() - c).fold(f64::NEG_INFINITY, f64::max);
        worst = worst.max(excess);
    }
    check(worst <= 1e-3, format!("largest excess over the disc {worst:.3e}"))
}

fn ac6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut min_slack, mut ring, mut intercept) = (f64::INFINITY, 0.0f64, 0.0f64);
    for n in 2..=5usize {
        let gammas: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..3.0)).collect();
        let region = cascade_srg(&gammas).map_err(|e| e.to_string())?;
        for _ in 0..100_000 {
            let mut z = Complex64::new(1.0, 0.0);
            for g in &gammas {
                let th: f64 = rng.gen_range(-PI / 2.0..=PI / 2.0);
                let r: f64 = if rng.gen_bool(0.5) { 1.0 } else { rng.gen() };
                z *= Complex64::from_polar(r * g * th.cos(), th);
            }
            let s = if region.contains(z) { 0.0 } else { -region.point_distance(z) };
            min_slack = min_slack.min(s);
        }
        let p: f64 = gammas.iter().product();
        for k in 0..=64 {
            let th = (PI / n as f64) * (2.0 * k as f64 / 64.0 - 1.0);
            let z = Complex64::from_polar(p * th.cos().powi(n as i32), n as f64 * th);
            let d = if region.contains(z) { region.signed_distance(z).abs() } else { region.point_distance(z) };
            ring = ring.max(d);
        }
        let want = -p * cos_pi_n_pow_n(n);
        let got = cascade_boundary_point(&gammas, PI);
        intercept = intercept.max((got.re - want).abs().max(got.im.abs()));
        let eps = 1e-9 * (1.0 + p);
        if n > 2 && (!region.contains(Complex64::new(want + eps, 0.0)) || region.contains(Complex64::new(want - eps, 0.0))) {
            return Err(format!("n={n}: intercept {want} is not where the region crosses the negative axis"));
        }
    }
    check(
        min_slack >= -1e-9 && ring <= 1e-9 && intercept <= 1e-12,
        format!("min slack {min_slack:.3e}, equal-angle distance {ring:.3e}, intercept error {intercept:.3e}"),
    )
}

fn ac7() -> Outcome {
    let taus = tau_grid(128);
    let lo = nyquist_stability(&cascade_srg(&[1.999; 3]).map_err(|e| e.to_string())?, &taus).map_err(|e| e.to_string())?;
    let hi = nyquist_stability(&cascade_srg(&[2.001; 3]).map_err(|e| e.to_string())?, &taus).map_err(|e| e.to_string())?;
    let s = secant_check(&[1.999; 3]).map_err(|e| e.to_string())?;
    let iv = uncertain_gain_interval(&[1.0; 3]).map_err(|e| e.to_string())?;
    check(
        lo.stable && !hi.stable && s.satisfied && s.threshold == 8.0 && iv == (-7.0, 1.0),
        format!("1.999: stable={} (margin {:.2e}), 2.001: stable={}, threshold {}, interval {:?}", lo.stable, lo.margin, hi.stable, s.threshold, iv),
    )
}

fn ac8() -> Outcome {
    let start = Instant::now();
    let p = parse_tf("s^2/(s^3+2*s^2+2*s+1)").map_err(|e| e.to_string())?;
    let ts: Vec<f64> = (0..60).map(|i| 0.05 + (3.0 - 0.05) * i as f64 / 59.0).collect();
    let mut betas = Vec::new();
    let mut worst = 0.0f64;
    for &t in &ts {
        let b = delay_beta_bound(&p, t).map_err(|e| e.to_string())?;
        worst = worst.max((b.grid_min_re - b.min_re).abs() / b.min_re.abs());
        betas.push(b.beta);
    }
    let finite = betas.iter().all(|b| b.is_finite() && *b > 0.0);
    let slopes: Vec<f64> = betas.windows(2).map(|w| w[1] - w[0]).collect();
    let switches = slopes.windows(2).filter(|w| w[0] > 0.0 && w[1] < 0.0).count();
    let secs = start.elapsed().as_secs_f64();
    check(
        finite && worst <= 1e-4 && switches >= 1 && secs < 60.0,
        format!("grid vs refined {worst:.2e}, {switches} switch point(s), beta in [{:.3}, {:.3}], {secs:.2} s",
            betas.iter().copied().fold(f64::INFINITY, f64::min), betas.iter().copied().fold(0.0, f64::max)),
    )
}

fn ac9() -> Outcome {
    let tf = parse_tf("1/(s+1)").map_err(|e| e.to_string())?;
    let l = lti_srg(&tf, &FreqGrid::default()).map_err(|e| e.to_string())?;
    let v = nyquist_stability(&l, &tau_grid(128)).map_err(|e| e.to_string())?;
    check(
        v.stable && (v.margin - 1.0).abs() <= 1e-3 && (v.gain_bound - 1.0).abs() <= 1e-3,
        format!("s_m {:.6}, gain bound {:.6}", v.margin, v.gain_bound),
    )
}

fn lti(s: &str) -> OperatorSpec {
    OperatorSpec::Lti { tf: TfSpec::Expr(s.into()) }
}

fn ac10() -> Outcome {
    let sat = || OperatorSpec::Static { map: StaticMap::Saturation { limit: 1.0 } };
    let delayed = parse_tf("exp(-0.5*s)/(s+1)").map_err(|e| e.to_string())?;
    let err = |e: srgkit::SrgError| e.to_string();
    let systems: Vec<(&str, OperatorSpec, Region)> = vec![
        ("lag cascade", OperatorSpec::Cascade { ops: vec![lti("1/(s+1)"), lti("2/(s+2)")] }, cascade_srg(&[1.0, 1.0]).map_err(err)?),
        ("delayed lag", lti("exp(-0.5*s)/(s+1)"), lti_srg(&delayed, &FreqGrid::default()).map_err(err)?),
        (
            "saturation loop",
            OperatorSpec::NegFeedback { forward: Box::new(sat()), backward: Box::new(OperatorSpec::Gain { k: 0.5 }) },
            class_srg(OperatorClass::OutputStrict { gamma: 1.5 }).map_err(err)?,
        ),
        ("saturation then lag", OperatorSpec::Cascade { ops: vec![sat(), lti("1/(s+1)")] }, cascade_srg(&[1.0, 1.0]).map_err(err)?),
        (
            "first-order nonlinear",
            OperatorSpec::FirstOrderNl { f: StaticMap::Linear { slope: 1.0 }, g: StaticMap::Saturation { limit: 1.0 } },
            first_order_nl_srg(1.0, 1.0).map_err(err)?,
        ),
    ];
    let settings = SimSettings::default();
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, op, region) in &systems {
        let mut slacks = Vec::new();
        for (h, tol) in [(20.0, 2e-2), (40.0, 1e-2)] {
            let strategies = [
                Strategy::RandomPc(RandomConfig { hold: 0.25, active: h / 2.0, horizon: h, amplitude: 2.0 }),
                Strategy::SinusoidPairs(SinusoidConfig { omegas: vec![0.0, 0.3, 1.0, 3.0], horizon: 5.0 * h, amplitude: 2.0, bias: 0.0 }),
            ];
            let mut min_slack = f64::INFINITY;
            for st in &strategies {
                let pts = sample_srg(op, st, 120, &settings).map_err(err)?;
                let rep = check_inclusion(&pts, region, tol).map_err(err)?;
                ok &= rep.pass;
                min_slack = min_slack.min(rep.min_slack);
            }
            slacks.push(format!("H={h}: min slack {min_slack:.2e}, tol {tol:.0e}"));
        }
        lines.push(format!("{name} [{}]", slacks.join(", ")));
    }
    check(ok, lines.join("; "))
}

fn ac11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut mob, mut bk) = (0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let z = Complex64::from_polar((rng.gen_range(-6.0..6.0f64)).exp(), rng.gen_range(-PI..PI));
        let back = mobius_invert(mobius_invert(ExtPoint::Finite(z))).finite().ok_or("lost a finite point")?;
        mob = mob.max((back - z).norm() / z.norm());
        let w = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(1e-3..5.0));
        let back = bk_unmap(bk_map(w).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        bk = bk.max((back - w).norm() / (1.0 + w.norm()));
    }
    let inf_ok = mobius_invert(mobius_invert(ExtPoint::Infinity)) == ExtPoint::Infinity;
    let tf = parse_tf("exp(-0.2*s)/(s^2+s+1)").map_err(|e| e.to_string())?;
    let regions = vec![
        Region::disc(0.5, 0.5),
        class_srg(OperatorClass::InputStrict { lambda: 0.3 }).map_err(|e| e.to_string())?,
        cascade_srg(&[1.0, 2.0, 0.5]).map_err(|e| e.to_string())?,
        lti_srg(&tf, &FreqGrid::default()).map_err(|e| e.to_string())?,
        srgkit::geom::region_invert(&Region::disc(1.0, 0.5)),
    ];
    let mut json_ok = true;
    for r in &regions {
        let a = r.to_json().map_err(|e| e.to_string())?;
        let b = Region::from_json(&a).map_err(|e| e.to_string())?.to_json().map_err(|e| e.to_string())?;
        json_ok &= a == b;
    }
    check(
        mob <= 1e-12 && bk <= 1e-12 && inf_ok && json_ok,
        format!("Möbius {mob:.2e}, Beltrami-Klein {bk:.2e}, JSON identical: {json_ok}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("AC1 first-order LTI SRG", ac1),
        ("AC2 saturation SRG exactness", ac2),
        ("AC3 small gain", ac3),
        ("AC4 passivity", ac4),
        ("AC5 weak passivity", ac5),
        ("AC6 cascade soundness and tightness", ac6),
        ("AC7 secant condition", ac7),
        ("AC8 delay example", ac8),
        ("AC9 nonlinear Nyquist", ac9),
        ("AC10 simulator oracle agreement", ac10),
        ("AC11 geometry kernel", ac11),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(d) => println!("PASS {name}: {d}"),
            Err(d) => {
                failed += 1;
                println!("FAIL {name}: {d}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
