//! Stability certificates for feedback interconnections from the separation
//! of SRG regions.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SrgError};
use crate::geom::curve::golden_min;
use crate::geom::{
    chord_closure, h_convex_hull_exact, has_chord_property, minkowski_sum_flagged, region_crop, region_distance,
    region_invert, region_scale, Region,
};
use crate::srg::{cascade_boundary_point, cascade_srg, OperatorClass};
use crate::transferfn::TransferFunction;

/// Distances at or below this count as touching.
pub const MARGIN_TOL: f64 = 1e-12;
pub const DEFAULT_TAU_POINTS: usize = 128;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub stable: bool,
    /// `s_m` for a Nyquist check, `r_m` for a two-block loop.
    pub margin: f64,
    /// Reciprocal of the margin.
    pub gain_bound: f64,
    /// Bound from input to output of `L` in a Nyquist check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_gain_bound: Option<f64>,
    pub tau_trace: Vec<(f64, f64)>,
    pub conservatism_flags: Vec<String>,
}

impl Verdict {
    fn from_trace(trace: Vec<(f64, f64)>, margin: f64, flags: Vec<String>) -> Self {
        let min = trace.iter().map(|t| t.1).fold(f64::INFINITY, f64::min);
        let stable = min > MARGIN_TOL && margin > MARGIN_TOL;
        Verdict {
            stable,
            margin,
            gain_bound: if margin > 0.0 { 1.0 / margin } else { f64::INFINITY },
            output_gain_bound: None,
            tau_trace: trace,
            conservatism_flags: flags,
        }
    }
}

/// `n` geometric points on `[1e-4, 1]`; the last point is exactly 1.
pub fn tau_grid(n: usize) -> Vec<f64> {
    let n = n.max(1);
    if n == 1 {
        return vec![1.0];
    }
    let a = 1e-4f64.ln();
    let mut g: Vec<f64> = (0..n).map(|i| (a * (1.0 - i as f64 / (n - 1) as f64)).exp()).collect();
    g[0] = 1e-4;
    g[n - 1] = 1.0;
    g
}

fn with_unit(taus: &[f64]) -> Result<Vec<f64>> {
    if let Some(t) = taus.iter().find(|t| !(**t > 0.0 && **t <= 1.0)) {
        return Err(SrgError::InvalidParameter(format!("tau must lie in (0, 1], got {t}")));
    }
    let mut v = taus.to_vec();
    if !v.contains(&1.0) {
        v.push(1.0);
    }
    v.sort_by(f64::total_cmp);
    Ok(v)
}

fn require_bounded(r: &Region, what: &str) -> Result<()> {
    if r.is_empty() {
        return Err(SrgError::Empty(format!("{what} region is empty")));
    }
    if r.includes_infinity || !r.is_bounded() {
        return Err(SrgError::ContainsInfinity(format!("{what} must have finite incremental gain")));
    }
    Ok(())
}

/// Unity negative feedback around `L`: stable when `-1/τ` stays outside `L`
/// for every `τ`.
pub fn nyquist_stability(l: &Region, taus: &[f64]) -> Result<Verdict> {
    require_bounded(l, "loop")?;
    let taus = with_unit(taus)?;
    let trace: Vec<(f64, f64)> = taus
        .par_iter()
        .map(|&t| region_distance(l, &Region::point(-1.0 / t)).map(|d| (t, d)))
        .collect::<Result<_>>()?;
    let s_m = trace.last().unwrap().1;
    let mut v = Verdict::from_trace(trace, s_m, Vec::new());
    if v.stable {
        let inv = region_invert(l);
        let r = region_distance(&inv, &Region::point(-1.0))?;
        v.output_gain_bound = Some(if r > 0.0 { 1.0 / r } else { f64::INFINITY });
    }
    Ok(v)
}

/// Negative feedback of `H1` with `H̄2`: stable when `H1^{-1}` and `-τ H̄2`
/// stay apart for every `τ`.
pub fn robust_feedback(h1: &Region, h2bar: &Region, taus: &[f64]) -> Result<Verdict> {
    require_bounded(h1, "H1")?;
    if h2bar.is_empty() {
        return Err(SrgError::Empty("H2 region is empty".into()));
    }
    let taus = with_unit(taus)?;
    let mut flags = Vec::new();
    let h2 = if has_chord_property(h2bar, crate::geom::closure::DEFAULT_PROPERTY_POINTS) {
        h2bar.clone()
    } else {
        flags.push("chord closure applied to H2".to_string());
        chord_closure(h2bar)
    };
    let a = region_invert(h1);
    let trace: Vec<(f64, f64)> = taus
        .par_iter()
        .map(|&t| {
            let b = region_scale(&h2, -t)?;
            region_distance(&a, &b).map(|d| (t, d))
        })
        .collect::<Result<_>>()?;
    let r_m = trace.last().unwrap().1;
    Ok(Verdict::from_trace(trace, r_m, flags))
}

/// `γ/(1 − γλ)` when `γλ < 1`, otherwise `∞`.
pub fn small_gain_bound(gamma: f64, lambda: f64) -> f64 {
    if gamma * lambda < 1.0 {
        gamma / (1.0 - gamma * lambda)
    } else {
        f64::INFINITY
    }
}

/// `μ²/λ` for an input-strict (`λ`) operator with gain `μ` against a passive one.
pub fn passivity_bound(lambda: f64, mu: f64) -> Result<f64> {
    if !(lambda > 0.0) || !(mu >= lambda) {
        return Err(SrgError::InvalidParameter(format!("passivity bound needs 0 < lambda <= mu, got ({lambda}, {mu})")));
    }
    Ok(mu * mu / lambda)
}

/// Class of the loop of a `γ`-output-strict and a `λ`-input-strict operator.
pub fn weak_passivity(gamma: f64, lambda: f64) -> Result<OperatorClass> {
    if !(gamma > 0.0) {
        return Err(SrgError::InvalidParameter(format!("gamma must be positive, got {gamma}")));
    }
    let s = gamma + lambda;
    if s < 0.0 {
        return Err(SrgError::NoCertificate(format!("gamma + lambda = {s} < 0")));
    }
    Ok(if s == 0.0 {
        OperatorClass::IncrementallyPositive
    } else {
        OperatorClass::OutputStrict { gamma: s }
    })
}

/// The loop region computed by the algebra: `(H1^{-1} + H2)^{-1}` with both
/// half-planes cropped to `|z| <= crop`.
pub fn weak_passivity_region(gamma: f64, lambda: f64, crop: f64) -> Result<(Region, Vec<String>)> {
    weak_passivity(gamma, lambda)?;
    let h1_inv = region_invert(&Region::disc(0.5 / gamma, 0.5 / gamma));
    let h2 = Region::re_at_least(lambda).with_infinity(true);
    let (sum, mut flags) = minkowski_sum_flagged(&region_crop(&h1_inv, crop), &region_crop(&h2, crop))?;
    flags.push(format!("operands cropped to |z| <= {crop}"));
    Ok((region_invert(&sum), flags))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecantReport {
    pub satisfied: bool,
    /// `(sec(π/n))^n`, infinite for `n <= 2`.
    pub threshold: f64,
    /// `|-1 - z(π)|` at the negative-axis intercept.
    pub intercept_margin: f64,
    /// Distance from `-1` to the whole cascade region.
    pub region_margin: f64,
}

fn check_gammas(gammas: &[f64]) -> Result<()> {
    if gammas.is_empty() {
        return Err(SrgError::InvalidParameter("at least one gain is required".into()));
    }
    if let Some(g) = gammas.iter().find(|g| !(**g > 0.0 && g.is_finite())) {
        return Err(SrgError::InvalidParameter(format!("gains must be positive, got {g}")));
    }
    Ok(())
}

/// `(cos(π/n))^n`, exact for the angles with rational cosines.
pub fn cos_pi_n_pow_n(n: usize) -> f64 {
    match n {
        1 => -1.0,
        2 => 0.0,
        3 => 0.125,
        4 => 0.25,
        6 => 27.0 / 64.0,
        _ => (PI / n as f64).cos().powi(n as i32),
    }
}

pub fn secant_check(gammas: &[f64]) -> Result<SecantReport> {
    check_gammas(gammas)?;
    let n = gammas.len();
    let p: f64 = gammas.iter().product();
    let threshold = if n <= 2 { f64::INFINITY } else { 1.0 / cos_pi_n_pow_n(n) };
    let intercept = if n <= 2 { cascade_boundary_point(gammas, PI).re.max(0.0) } else { -p * cos_pi_n_pow_n(n) };
    let region_margin = region_distance(&cascade_srg(gammas)?, &Region::point(-1.0))?;
    Ok(SecantReport {
        satisfied: p < threshold,
        threshold,
        intercept_margin: (-1.0 - intercept).abs(),
        region_margin,
    })
}

/// Interval of feedback gains `k` for which the cascade in unity feedback
/// around `1 - k` stays certified.
pub fn uncertain_gain_interval(gammas: &[f64]) -> Result<(f64, f64)> {
    check_gammas(gammas)?;
    let p: f64 = gammas.iter().product();
    let c = cos_pi_n_pow_n(gammas.len());
    let lo = if c <= 0.0 { f64::NEG_INFINITY } else { 1.0 - 1.0 / (p * c) };
    Ok((lo, 1.0 / p))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DelayBound {
    /// Largest certified `β`; infinite when the minimum is nonnegative.
    pub beta: f64,
    /// Refined `min_ω Re(P(jω) e^{-jωT})`.
    pub min_re: f64,
    /// Minimum over the search grid alone.
    pub grid_min_re: f64,
    pub omega: f64,
}

/// Frequencies searched for the delay bound: a log grid and a uniform grid
/// over `[0, max(10, 20π/T)]`.
fn delay_search_grid(t: f64) -> Vec<f64> {
    let wmax = if t > 0.0 { (20.0 * PI / t).max(10.0) } else { 10.0f64.max(1e3) };
    let n = 8192;
    let mut w: Vec<f64> = (0..=n).map(|i| wmax * i as f64 / n as f64).collect();
    let (a, b) = (1e-4f64.ln(), wmax.ln());
    w.extend((0..4096).map(|i| (a + (b - a) * i as f64 / 4095.0).exp()));
    w.sort_by(f64::total_cmp);
    w.dedup();
    w
}

pub fn delay_beta_bound(p: &TransferFunction, t: f64) -> Result<DelayBound> {
    p.require_hurwitz()?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(SrgError::InvalidParameter(format!("delay must be nonnegative, got {t}")));
    }
    let pd = p.clone().with_delay(p.delay + t);
    let f = |w: f64| pd.eval(w).map(|z| z.re).unwrap_or(f64::INFINITY);
    let grid = delay_search_grid(t);
    let vals: Vec<f64> = grid.par_iter().map(|&w| f(w)).collect();
    let mut idx: Vec<usize> = (0..grid.len())
        .filter(|&i| {
            let l = if i == 0 { f64::INFINITY } else { vals[i - 1] };
            let r = if i + 1 == grid.len() { f64::INFINITY } else { vals[i + 1] };
            vals[i] <= l && vals[i] <= r
        })
        .collect();
    idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    idx.truncate(8);
    let (gi, grid_min) = idx.first().map(|&i| (i, vals[i])).unwrap_or((0, vals[0]));
    let (mut best_w, mut best) = (grid[gi], grid_min);
    for &i in &idx {
        let lo = if i == 0 { 0.0 } else { grid[i - 1] };
        let hi = if i + 1 == grid.len() { grid[i] } else { grid[i + 1] };
        let (w, v) = golden_min(f, lo, hi);
        if v < best {
            best = v;
            best_w = w;
        }
    }
    let beta = if best >= 0.0 { f64::INFINITY } else { -1.0 / best };
    Ok(DelayBound { beta, min_re: best, grid_min_re: grid_min, omega: best_w })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CongestionBound {
    /// Upper bound on `N_u/δ`; infinite when `L` stays in the right half-plane.
    pub bound: f64,
    /// How far the bounding region of `L` reaches into `{Re < 0}`.
    pub extent: f64,
    pub samples: usize,
    pub flags: Vec<String>,
}

/// Modulus beyond which the Nyquist curve of `e^{sT}(s + β)` is cropped.
pub const CONGESTION_CROP: f64 = 2e3;

/// Upper half-plane samples of `e^{jωT}(β + jω)` up to `|z| = crop`, spaced so
/// that chords stay below `1e-3·|z|²`.
pub fn congestion_forward_samples(beta: f64, t: f64, crop: f64) -> Vec<Complex64> {
    let z = |w: f64| Complex64::from_polar(1.0, w * t) * Complex64::new(beta, w);
    let wmax = (crop * crop - beta * beta).max(0.0).sqrt();
    let mut out = Vec::new();
    let mut w = 0.0;
    loop {
        let v = z(w);
        out.push(Complex64::new(v.re, v.im.abs()));
        if w >= wmax {
            break;
        }
        let speed = ((1.0 + t * beta).powi(2) + (t * w).powi(2)).sqrt();
        let step = (1e-3 * v.norm_sqr() / speed).clamp(1e-4, 0.05);
        w = (w + step).min(wmax);
    }
    out
}

/// Bound on `N_u/δ` for the congestion loop with lag `β`, `1/γ`-output-strict
/// price map and round-trip delay `T`.
pub fn congestion_bound(beta: f64, gamma: f64, t: f64) -> Result<CongestionBound> {
    if !(gamma > 0.0 && gamma < beta && beta.is_finite()) {
        return Err(SrgError::InvalidParameter(format!("need 0 < gamma < beta, got gamma={gamma}, beta={beta}")));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(SrgError::InvalidParameter(format!("delay must be nonnegative, got {t}")));
    }
    let samples = congestion_forward_samples(beta, t, CONGESTION_CROP);
    let a = h_convex_hull_exact(&samples)?;
    let (sum, mut flags) = minkowski_sum_flagged(&a, &Region::disc(0.0, gamma))?;
    let l = region_invert(&sum);
    let mut extent = l.support(Complex64::new(-1.0, 0.0));
    if t > 0.0 {
        extent = extent.max(1.0 / (CONGESTION_CROP - gamma));
        flags.push(format!("forward path cropped at |z| = {CONGESTION_CROP}"));
    }
    flags.push("delayed price map bounded by the disc |z| <= gamma".to_string());
    flags.push("bound on N_u/delta taken equal to r".to_string());
    let bound = if extent <= 0.0 { f64::INFINITY } else { 1.0 / extent };
    Ok(CongestionBound { bound, extent, samples: samples.len(), flags })
}
