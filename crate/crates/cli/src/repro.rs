//! Figure reproductions.

use std::path::Path;

use anyhow::Result;
use num_complex::Complex64;
use srgkit::feedback::{congestion_bound, cos_pi_n_pow_n, delay_beta_bound, nyquist_stability, secant_check, tau_grid};
use srgkit::geom::region_invert;
use srgkit::srg::{cascade_srg, lti_srg, nyquist_curve};
use srgkit::transferfn::frequency_response;
use srgkit::{parse_tf, FreqGrid, Region};

use crate::output::{emit, num, Csv};
use crate::svg::{frame_points, line_chart, Bounds, Plot, Series};

pub const DELAY_PLANT: &str = "s^2/(s^3+2*s^2+2*s+1)";
pub const THIRD_ORDER: &str = "1/(s^3+5*s^2+2*s+1)";

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn write_both(dir: &Path, stem: &str, csv: &Csv, svg: &str) -> Result<()> {
    let c = dir.join(format!("{stem}.csv"));
    let s = dir.join(format!("{stem}.svg"));
    csv.write(Some(&c))?;
    emit(Some(&s), svg)?;
    println!("{}", c.display());
    println!("{}", s.display());
    Ok(())
}

/// Point of `r`'s boundary nearest to `z`, for margin annotations.
pub fn nearest_boundary(r: &Region, z: Complex64) -> Option<Complex64> {
    r.boundary_samples().into_iter().filter(|w| w.re.is_finite() && w.im.is_finite()).min_by(|a, b| (a - z).norm().total_cmp(&(b - z).norm()))
}

pub fn delay(dir: &Path, tmin: f64, tmax: f64, tpoints: usize) -> Result<()> {
    let p = parse_tf(DELAY_PLANT)?;
    let mut csv = Csv::new(&["T", "beta_max", "min_re", "omega", "gain_bound_beta1"]);
    csv.comment(format!("plant: {p}"))
        .comment(format!("T grid: {tpoints} points on [{tmin}, {tmax}]"))
        .comment("beta_max = -1/min_w Re(P(jw) e^(-jwT)); gain bound for beta = 1 is 1/(1 + min_re)")
        .flags(&[]);
    let (mut beta, mut gain) = (Vec::new(), Vec::new());
    for t in linspace(tmin, tmax, tpoints) {
        let b = delay_beta_bound(&p, t)?;
        let r_m = 1.0 + b.min_re;
        let g = if r_m > 0.0 { 1.0 / r_m } else { f64::INFINITY };
        csv.row(vec![num(t), num(b.beta), num(b.min_re), num(b.omega), num(g)]);
        beta.push((t, b.beta));
        gain.push((t, g));
    }
    let svg = line_chart(
        "Largest certified beta against delay T",
        "T",
        "beta",
        &[Series { label: "incremental bound on beta", color: "#555", data: beta }],
    );
    write_both(dir, "delay", &csv, &svg)?;
    let g = dir.join("delay_gain.svg");
    emit(Some(&g), &line_chart("Incremental gain bound for beta = 1", "T", "gain", &[Series { label: "1/r_m", color: "#1f4e9c", data: gain }]))?;
    println!("{}", g.display());
    Ok(())
}

pub fn cascade(dir: &Path, gamma: f64, n_max: usize) -> Result<()> {
    let mut csv = Csv::new(&["n", "intercept", "threshold", "product", "secant_satisfied", "margin"]);
    csv.comment(format!("gamma_i = {gamma} for every subsystem"))
        .comment("intercept = -prod(gamma) cos(pi/n)^n; margin = distance from -1 to the cascade region")
        .flags(&[]);
    let colors = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02"];
    let mut regions = Vec::new();
    for n in 1..=n_max {
        let g = vec![gamma; n];
        let r = cascade_srg(&g)?;
        let s = secant_check(&g)?;
        // A cascade of one or two touches the negative axis only at the origin.
        let intercept = if n <= 2 { 0.0 } else { -gamma.powi(n as i32) * cos_pi_n_pow_n(n) };
        csv.row(vec![
            n.to_string(),
            num(intercept),
            num(s.threshold),
            num(gamma.powi(n as i32)),
            s.satisfied.to_string(),
            num(s.region_margin),
        ]);
        regions.push(r);
    }
    let frame: Vec<Complex64> = regions.iter().flat_map(|r| frame_points(r, 1e3)).collect();
    let mut plot = Plot::new(Bounds::around(&frame), &format!("Cascade SRGs, n = 1..{n_max}, gamma = {gamma}"));
    if let Some(last) = regions.last() {
        plot.fill_region(last, "#bbbbbb");
    }
    for (k, r) in regions.iter().enumerate() {
        plot.boundary(r, colors[k % colors.len()]);
    }
    write_both(dir, "cascade", &csv, &plot.finish())?;

    // Inverse SRG of a four-stage cascade with the margin to -1.
    let n = 4.min(n_max.max(1));
    let inv = region_invert(&cascade_srg(&vec![gamma; n])?);
    let v = nyquist_stability(&cascade_srg(&vec![gamma; n])?, &tau_grid(128))?;
    let minus_one = Complex64::new(-1.0, 0.0);
    let mut pts = frame_points(&inv, 20.0);
    pts.push(minus_one);
    let mut plot = Plot::new(Bounds::around(&pts), &format!("Inverse SRG of a cascade of {n}"));
    plot.fill_region(&inv, "#bbbbbb");
    plot.boundary(&inv, "black");
    plot.marker(minus_one, "-1");
    let r_m = srgkit::geom::region_distance(&inv, &Region::point(-1.0))?;
    if let Some(z) = nearest_boundary(&inv, minus_one) {
        plot.segment(minus_one, z, &format!("r_m = {r_m:.4}"));
    }
    let p = dir.join("cascade_inverse.svg");
    emit(Some(&p), &plot.finish())?;
    println!("{}", p.display());
    println!("cascade of {n}: stable = {}, loop gain bound = {:.6}", v.stable, v.gain_bound);
    Ok(())
}

pub const CONGESTION_NOTE: &str = "assumption: the bound on N_u/delta is taken equal to r; the scaling between them is not derived here";

pub fn congestion(dir: &Path, beta: f64, gamma: f64, tmin: f64, tmax: f64, tpoints: usize) -> Result<()> {
    let mut csv = Csv::new(&["T", "bound", "extent", "samples"]);
    csv.comment(format!("beta = {beta}, gamma = {gamma}"))
        .comment(format!("T grid: {tpoints} points on [{tmin}, {tmax}]"))
        .comment(CONGESTION_NOTE);
    let mut flags: Vec<String> = Vec::new();
    let mut data = Vec::new();
    for t in linspace(tmin, tmax, tpoints) {
        let b = congestion_bound(beta, gamma, t)?;
        for f in b.flags {
            if !flags.contains(&f) {
                flags.push(f);
            }
        }
        csv.row(vec![num(t), num(b.bound), num(b.extent), b.samples.to_string()]);
        data.push((t, b.bound));
    }
    csv.flags(&flags);
    eprintln!("{CONGESTION_NOTE}");
    let svg = line_chart(
        "Congestion control: certified bound on N_u/delta",
        "T",
        "bound",
        &[Series { label: "bound", color: "#1f4e9c", data }],
    );
    write_both(dir, "congestion", &csv, &svg)
}

pub fn third_order(dir: &Path, tf: &str, grid: &FreqGrid) -> Result<()> {
    let g = parse_tf(tf)?;
    let r = lti_srg(&g, grid)?;
    let curve = nyquist_curve(&g, grid)?;
    let resp = frequency_response(&g, grid)?;
    let mut csv = Csv::new(&["omega", "re", "im"]);
    csv.comment(format!("tf: {g}"))
        .comment(format!("omega grid: {} log points on [{}, {}] with chord refinement {}", grid.points, grid.wmin, grid.wmax, grid.max_chord))
        .flags(&[]);
    for s in &resp {
        csv.row(vec![num(s.omega), num(s.value.re), num(s.value.im)]);
    }
    let full: Vec<Complex64> = resp.iter().map(|s| s.value).collect();
    let mut plot = Plot::new(Bounds::around(&curve), &format!("SRG of {g}"));
    plot.fill_region(&r, "#bbbbbb");
    plot.polyline(&full, "black", 1.5);
    let conj: Vec<Complex64> = full.iter().map(|z| z.conj()).collect();
    plot.polyline(&conj, "black", 1.5);
    write_both(dir, "third_order", &csv, &plot.finish())
}
