//! Real rational transfer functions with an optional pure delay.

mod parse;
pub mod poly;

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SrgError};

pub use parse::parse_tf;

/// `N(s)/D(s) · e^{-sT}` with coefficients in descending powers of `s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferFunction {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
    #[serde(default)]
    pub delay: f64,
}

impl TransferFunction {
    /// Normalizes so that the denominator is monic.
    pub fn new(num: Vec<f64>, den: Vec<f64>, delay: f64) -> Result<Self> {
        if num.iter().chain(&den).any(|c| !c.is_finite()) {
            return Err(SrgError::InvalidParameter("coefficients must be finite".into()));
        }
        if den.is_empty() || poly::is_zero(&den) {
            return Err(SrgError::InvalidParameter("denominator is the zero polynomial".into()));
        }
        if !(delay >= 0.0) || !delay.is_finite() {
            return Err(SrgError::InvalidParameter(format!("delay must be finite and nonnegative, got {delay}")));
        }
        let den = poly::trim(&den);
        let lead = den[0];
        let num = if num.is_empty() { vec![0.0] } else { poly::trim(&num) };
        Ok(TransferFunction {
            num: num.iter().map(|c| c / lead).collect(),
            den: den.iter().map(|c| c / lead).collect(),
            delay,
        })
    }

    pub fn gain(k: f64) -> Self {
        TransferFunction { num: vec![k], den: vec![1.0], delay: 0.0 }
    }

    pub fn pure_delay(t: f64) -> Result<Self> {
        Self::new(vec![1.0], vec![1.0], t)
    }

    pub fn with_delay(mut self, t: f64) -> Self {
        self.delay = t;
        self
    }

    pub fn relative_degree(&self) -> isize {
        poly::degree(&self.den) as isize - poly::degree(&self.num) as isize
    }

    pub fn is_strictly_proper(&self) -> bool {
        self.relative_degree() > 0 || poly::is_zero(&self.num)
    }

    pub fn is_proper(&self) -> bool {
        self.relative_degree() >= 0
    }

    /// Value at `s`.
    pub fn eval_s(&self, s: Complex64) -> Result<Complex64> {
        let delay = if self.delay > 0.0 { (-s * self.delay).exp() } else { Complex64::new(1.0, 0.0) };
        let ratio = if s.norm() > 1.0 {
            let (dn, dd) = (self.num.len() as i32 - 1, self.den.len() as i32 - 1);
            let d = poly::eval_reversed(&self.den, s);
            if d.norm() <= 1e-14 * self.den.iter().map(|c| c.abs()).sum::<f64>() {
                return Err(SrgError::Evaluation(format!("pole at s = {s}")));
            }
            poly::eval_reversed(&self.num, s) / d * s.powi(dn - dd)
        } else {
            let d = poly::eval(&self.den, s);
            if d.norm() <= 1e-14 * self.den.iter().map(|c| c.abs()).sum::<f64>() {
                return Err(SrgError::Evaluation(format!("pole at s = {s}")));
            }
            poly::eval(&self.num, s) / d
        };
        Ok(ratio * delay)
    }

    /// Frequency response `G(jω)`.
    pub fn eval(&self, omega: f64) -> Result<Complex64> {
        self.eval_s(Complex64::new(0.0, omega))
    }

    /// Limit of `G(jω)` as `ω → ∞`, when it exists and is finite.
    pub fn eval_infinity(&self) -> Option<Complex64> {
        match self.relative_degree() {
            r if r > 0 || poly::is_zero(&self.num) => Some(Complex64::new(0.0, 0.0)),
            0 if self.delay == 0.0 => Some(Complex64::new(self.num[0] / self.den[0], 0.0)),
            _ => None,
        }
    }

    /// Roots of the denominator (companion-matrix eigenvalues).
    pub fn poles(&self) -> Vec<Complex64> {
        roots(&self.den)
    }

    /// All poles strictly in the open left half-plane (real part below −1e−9).
    pub fn is_hurwitz(&self) -> bool {
        self.poles().iter().all(|p| p.re < -1e-9)
    }

    pub fn require_hurwitz(&self) -> Result<()> {
        if self.is_hurwitz() {
            Ok(())
        } else {
            Err(SrgError::Unstable(format!("{self} has poles outside the open left half-plane")))
        }
    }
}

pub fn eval_tf(tf: &TransferFunction, omega: f64) -> Result<Complex64> {
    tf.eval(omega)
}

pub fn is_hurwitz(tf: &TransferFunction) -> bool {
    tf.is_hurwitz()
}

/// Roots of a real polynomial via eigenvalues of its companion matrix.
pub fn roots(p: &[f64]) -> Vec<Complex64> {
    let p = poly::trim(p);
    let n = p.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        m[(0, j)] = -p[j + 1] / p[0];
    }
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    m.complex_eigenvalues().iter().copied().collect()
}

fn write_poly(f: &mut fmt::Formatter<'_>, p: &[f64]) -> fmt::Result {
    let n = p.len() - 1;
    let mut first = true;
    for (i, &c) in p.iter().enumerate() {
        let k = n - i;
        if c == 0.0 && !(n == 0) {
            continue;
        }
        let mag = c.abs();
        if first {
            if c < 0.0 {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if c < 0.0 { '-' } else { '+' })?;
        }
        first = false;
        match (k, mag == 1.0) {
            (0, _) => write!(f, "{mag}")?,
            (_, true) => {}
            _ => write!(f, "{mag}*")?,
        }
        match k {
            0 => {}
            1 => write!(f, "s")?,
            _ => write!(f, "s^{k}")?,
        }
    }
    Ok(())
}

impl fmt::Display for TransferFunction {
    /// Canonical form `(num)/(den)` followed by `*exp(-T*s)` when delayed.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        write_poly(f, &self.num)?;
        write!(f, ")/(")?;
        write_poly(f, &self.den)?;
        write!(f, ")")?;
        if self.delay > 0.0 {
            write!(f, "*exp(-{}*s)", self.delay)?;
        }
        Ok(())
    }
}

/// Logarithmic frequency grid `[wmin, wmax]` with `points` samples, plus
/// `ω = 0`, an extended tail and the point at infinity when it exists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FreqGrid {
    pub wmin: f64,
    pub wmax: f64,
    pub points: usize,
    /// Chord length, relative to the largest modulus, that triggers bisection.
    pub max_chord: f64,
}

impl Default for FreqGrid {
    fn default() -> Self {
        FreqGrid { wmin: 1e-3, wmax: 1e3, points: 2048, max_chord: 1e-2 }
    }
}

impl FreqGrid {
    pub fn new(wmin: f64, wmax: f64, points: usize) -> Result<Self> {
        if !(wmin > 0.0 && wmax > wmin && wmax.is_finite() && points >= 2) {
            return Err(SrgError::InvalidParameter(format!(
                "frequency grid needs 0 < wmin < wmax and at least 2 points, got [{wmin}, {wmax}] x {points}"
            )));
        }
        Ok(FreqGrid { wmin, wmax, points, ..Default::default() })
    }

    pub fn log_points(&self) -> Vec<f64> {
        let (a, b) = (self.wmin.ln(), self.wmax.ln());
        (0..self.points)
            .map(|i| (a + (b - a) * i as f64 / (self.points - 1) as f64).exp())
            .collect()
    }
}

/// One sample of a frequency response; `omega = ∞` marks the limit point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FreqSample {
    pub omega: f64,
    pub value: Complex64,
}

const MAX_BISECTION_DEPTH: u32 = 10;
const MAX_TAIL_DECADES: usize = 12;

/// Samples `G(jω)` for `ω ≥ 0` in increasing order.
pub fn frequency_response(tf: &TransferFunction, grid: &FreqGrid) -> Result<Vec<FreqSample>> {
    let mut omegas = vec![0.0];
    omegas.extend(grid.log_points());
    let mut values: Vec<Complex64> = omegas.iter().map(|&w| tf.eval(w)).collect::<Result<_>>()?;
    if tf.is_strictly_proper() {
        let per_decade = (grid.points as f64 / (grid.wmax / grid.wmin).log10()).max(16.0);
        let ratio = 10f64.powf(1.0 / per_decade);
        let peak = |v: &[Complex64]| v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut w = grid.wmax;
        let limit = grid.wmax * 10f64.powi(MAX_TAIL_DECADES as i32);
        while values.last().unwrap().norm() >= 1e-6 * peak(&values) && w < limit {
            w *= ratio;
            omegas.push(w);
            values.push(tf.eval(w)?);
        }
    }
    let peak = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let chord = grid.max_chord * peak.max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(omegas.len());
    for i in 0..omegas.len() {
        out.push(FreqSample { omega: omegas[i], value: values[i] });
        if i + 1 < omegas.len() {
            refine(tf, omegas[i], values[i], omegas[i + 1], values[i + 1], chord, 0, &mut out)?;
        }
    }
    if let Some(v) = tf.eval_infinity() {
        out.push(FreqSample { omega: f64::INFINITY, value: v });
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    tf: &TransferFunction,
    w0: f64,
    g0: Complex64,
    w1: f64,
    g1: Complex64,
    chord: f64,
    depth: u32,
    out: &mut Vec<FreqSample>,
) -> Result<()> {
    if depth >= MAX_BISECTION_DEPTH || (g1 - g0).norm() <= chord {
        return Ok(());
    }
    let wm = if w0 > 0.0 { (w0 * w1).sqrt() } else { 0.5 * w1 };
    let gm = tf.eval(wm)?;
    refine(tf, w0, g0, wm, gm, chord, depth + 1, out)?;
    out.push(FreqSample { omega: wm, value: gm });
    refine(tf, wm, gm, w1, g1, chord, depth + 1, out)
}
