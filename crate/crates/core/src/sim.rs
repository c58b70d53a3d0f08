//! Time-domain oracle: simulate operators on piecewise-constant signals and
//! collect empirical SRG points.

use std::collections::VecDeque;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SrgError};
use crate::geom::Region;
use crate::transferfn::{parse_tf, TransferFunction};

pub const DEFAULT_DT: f64 = 1.0 / 256.0;
pub const FEEDBACK_TOL: f64 = 1e-12;
const FEEDBACK_MAX_ITER: usize = 500;
const NL_SUBSTEPS: usize = 8;

/// Piecewise-constant signal: `samples[k]` holds on `[k dt, (k+1) dt)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Signal {
    pub dt: f64,
    pub samples: Vec<f64>,
}

impl Signal {
    pub fn new(dt: f64, samples: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0) || samples.is_empty() {
            return Err(SrgError::InvalidParameter("signal needs dt > 0 and at least one sample".into()));
        }
        Ok(Signal { dt, samples })
    }

    pub fn from_fn(dt: f64, horizon: f64, f: impl Fn(f64) -> f64) -> Self {
        let n = ((horizon / dt).round() as usize).max(1);
        Signal { dt, samples: (0..n).map(|k| f(k as f64 * dt)).collect() }
    }

    pub fn constant(dt: f64, horizon: f64, v: f64) -> Self {
        Self::from_fn(dt, horizon, |_| v)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn horizon(&self) -> f64 {
        self.dt * self.samples.len() as f64
    }

    pub fn inner(&self, other: &Signal) -> f64 {
        self.samples.iter().zip(&other.samples).map(|(a, b)| a * b).sum::<f64>() * self.dt
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    pub fn sub(&self, other: &Signal) -> Signal {
        Signal { dt: self.dt, samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a - b).collect() }
    }
}

/// Pointwise maps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StaticMap {
    /// Clips to `[-limit, limit]`.
    Saturation {
        #[serde(default = "one")]
        limit: f64,
    },
    Relu,
    /// Zero on `[-width, width]`, slope one outside.
    Deadzone { width: f64 },
    Linear { slope: f64 },
    /// Piecewise-linear interpolation through `(u, y)` points sorted by `u`,
    /// extended linearly beyond the ends.
    Table { points: Vec<(f64, f64)> },
}

fn one() -> f64 {
    1.0
}

impl StaticMap {
    pub fn apply(&self, u: f64) -> f64 {
        match self {
            StaticMap::Saturation { limit } => u.clamp(-limit, *limit),
            StaticMap::Relu => u.max(0.0),
            StaticMap::Deadzone { width } => {
                if u > *width {
                    u - width
                } else if u < -width {
                    u + width
                } else {
                    0.0
                }
            }
            StaticMap::Linear { slope } => slope * u,
            StaticMap::Table { points } => {
                let n = points.len();
                if n == 1 {
                    return points[0].1;
                }
                let i = match points.iter().position(|p| p.0 > u) {
                    Some(0) => 0,
                    Some(i) => i - 1,
                    None => n - 2,
                };
                let (a, b) = (points[i], points[i + 1]);
                a.1 + (b.1 - a.1) * (u - a.0) / (b.0 - a.0)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            StaticMap::Saturation { limit } if !(*limit > 0.0) => {
                Err(SrgError::InvalidParameter(format!("saturation limit must be positive, got {limit}")))
            }
            StaticMap::Deadzone { width } if !(*width >= 0.0) => {
                Err(SrgError::InvalidParameter(format!("deadzone width must be nonnegative, got {width}")))
            }
            StaticMap::Table { points } if points.is_empty() || points.windows(2).any(|w| !(w[0].0 < w[1].0)) => {
                Err(SrgError::InvalidParameter("table needs points with strictly increasing u".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Transfer function given as an expression or as coefficient lists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TfSpec {
    Expr(String),
    Coeffs(TransferFunction),
}

impl TfSpec {
    pub fn resolve(&self) -> Result<TransferFunction> {
        match self {
            TfSpec::Expr(s) => parse_tf(s),
            TfSpec::Coeffs(tf) => TransferFunction::new(tf.num.clone(), tf.den.clone(), tf.delay),
        }
    }
}

/// A simulatable operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum OperatorSpec {
    Static { map: StaticMap },
    Lti { tf: TfSpec },
    Delay { t: f64 },
    Gain { k: f64 },
    /// Applied left to right.
    Cascade { ops: Vec<OperatorSpec> },
    /// `e = u - backward(y)`, `y = forward(e)`.
    NegFeedback { forward: Box<OperatorSpec>, backward: Box<OperatorSpec> },
    /// `ẏ = -f(y) + g(u)`, `y(0) = 0`.
    FirstOrderNl { f: StaticMap, g: StaticMap },
}

impl OperatorSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| SrgError::Serialization(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| SrgError::Serialization(e.to_string()))
    }

    /// Delays as requested and as realized on a grid of step `dt`.
    pub fn snapped_delays(&self, dt: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        self.visit(&mut |op| {
            let t = match op {
                OperatorSpec::Delay { t } => Some(*t),
                OperatorSpec::Lti { tf } => tf.resolve().ok().map(|tf| tf.delay).filter(|t| *t > 0.0),
                _ => None,
            };
            if let Some(t) = t {
                out.push((t, (t / dt).round() * dt));
            }
        });
        out
    }

    fn visit(&self, f: &mut dyn FnMut(&OperatorSpec)) {
        f(self);
        match self {
            OperatorSpec::Cascade { ops } => ops.iter().for_each(|o| o.visit(f)),
            OperatorSpec::NegFeedback { forward, backward } => {
                forward.visit(f);
                backward.visit(f);
            }
            _ => {}
        }
    }
}

/// How an LTI or dynamic block reports its output over a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputMode {
    /// Value at the start of each step.
    Sample,
    /// Mean over each step, which makes inner products with piecewise-constant
    /// inputs exact.
    Average,
}

/// Discrete-time block driven one step at a time.
pub trait Stepper: Send {
    /// Output for the current step when the input over it is `u`.
    fn output(&self, u: f64) -> Result<f64>;
    /// Commits the step with input `u`.
    fn advance(&mut self, u: f64) -> Result<()>;
}

struct StaticStep(StaticMap);

impl Stepper for StaticStep {
    fn output(&self, u: f64) -> Result<f64> {
        Ok(self.0.apply(u))
    }
    fn advance(&mut self, _u: f64) -> Result<()> {
        Ok(())
    }
}

struct DelayStep {
    buf: VecDeque<f64>,
}

impl Stepper for DelayStep {
    fn output(&self, u: f64) -> Result<f64> {
        Ok(self.buf.front().copied().unwrap_or(u))
    }
    fn advance(&mut self, u: f64) -> Result<()> {
        if !self.buf.is_empty() {
            self.buf.pop_front();
            self.buf.push_back(u);
        }
        Ok(())
    }
}

/// Exact zero-order-hold discretization of a state-space realization.
struct LtiStep {
    phi: DMatrix<f64>,
    gamma: DVector<f64>,
    /// Output over a step: `cx·x + du·u`.
    cx: DVector<f64>,
    du: f64,
    x: DVector<f64>,
}

impl LtiStep {
    fn new(tf: &TransferFunction, dt: f64, mode: OutputMode) -> Result<Self> {
        if !tf.is_proper() {
            return Err(SrgError::InvalidParameter(format!("cannot simulate improper {tf}")));
        }
        let den = &tf.den;
        let n = den.len() - 1;
        let mut num = vec![0.0; n + 1 - tf.num.len()];
        num.extend(&tf.num);
        let d = num[0];
        let c = DVector::from_iterator(n, (1..=n).map(|i| num[i] - d * den[i]));
        let mut a = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            a[(0, j)] = -den[j + 1];
        }
        for i in 1..n {
            a[(i, i - 1)] = 1.0;
        }
        let mut b = DVector::<f64>::zeros(n);
        if n > 0 {
            b[0] = 1.0;
        }
        // exp([[A, I, 0], [0, 0, I], [0, 0, 0]] dt) holds e^{A dt}, ∫e^{As} and the double integral.
        let mut m = DMatrix::<f64>::zeros(3 * n, 3 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&(a.clone() * dt));
        for i in 0..n {
            m[(i, n + i)] = dt;
            m[(n + i, 2 * n + i)] = dt;
        }
        let e = m.exp();
        let phi = e.view((0, 0), (n, n)).into_owned();
        let s0 = e.view((0, n), (n, n)).into_owned();
        let s1 = e.view((0, 2 * n), (n, n)).into_owned();
        let gamma = &s0 * &b;
        let (cx, du) = match mode {
            OutputMode::Sample => (c.clone(), d),
            OutputMode::Average => {
                let cx = (s0.transpose() * &c) / dt;
                let du = d + c.dot(&(&s1 * &b)) / dt;
                (cx, du)
            }
        };
        if phi.iter().any(|v| !v.is_finite()) {
            return Err(SrgError::Numerical("matrix exponential overflowed".into()));
        }
        Ok(LtiStep { phi, gamma, cx, du, x: DVector::zeros(n) })
    }
}

impl Stepper for LtiStep {
    fn output(&self, u: f64) -> Result<f64> {
        Ok(self.cx.dot(&self.x) + self.du * u)
    }
    fn advance(&mut self, u: f64) -> Result<()> {
        self.x = &self.phi * &self.x + &self.gamma * u;
        Ok(())
    }
}

struct FirstOrderStep {
    f: StaticMap,
    g: StaticMap,
    y: f64,
    dt: f64,
    mode: OutputMode,
}

impl FirstOrderStep {
    /// RK4 over one step; returns the end state and the trapezoidal mean.
    fn integrate(&self, u: f64) -> (f64, f64) {
        let h = self.dt / NL_SUBSTEPS as f64;
        let gu = self.g.apply(u);
        let rhs = |y: f64| -self.f.apply(y) + gu;
        let mut y = self.y;
        let mut acc = 0.5 * y;
        for i in 0..NL_SUBSTEPS {
            let k1 = rhs(y);
            let k2 = rhs(y + 0.5 * h * k1);
            let k3 = rhs(y + 0.5 * h * k2);
            let k4 = rhs(y + h * k3);
            y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            acc += if i + 1 == NL_SUBSTEPS { 0.5 * y } else { y };
        }
        (y, acc / NL_SUBSTEPS as f64)
    }
}

impl Stepper for FirstOrderStep {
    fn output(&self, u: f64) -> Result<f64> {
        Ok(match self.mode {
            OutputMode::Sample => self.y,
            OutputMode::Average => self.integrate(u).1,
        })
    }
    fn advance(&mut self, u: f64) -> Result<()> {
        self.y = self.integrate(u).0;
        Ok(())
    }
}

struct CascadeStep(Vec<Box<dyn Stepper>>);

impl Stepper for CascadeStep {
    fn output(&self, u: f64) -> Result<f64> {
        self.0.iter().try_fold(u, |v, s| s.output(v))
    }
    fn advance(&mut self, u: f64) -> Result<()> {
        let mut v = u;
        for s in &mut self.0 {
            let next = s.output(v)?;
            s.advance(v)?;
            v = next;
        }
        Ok(())
    }
}

struct FeedbackStep {
    forward: Box<dyn Stepper>,
    backward: Box<dyn Stepper>,
}

impl FeedbackStep {
    /// Solves `e = u - B(F(e))` for the current step.
    fn solve(&self, u: f64) -> Result<f64> {
        let mut e = u - self.backward.output(self.forward.output(u)?)?;
        for _ in 0..FEEDBACK_MAX_ITER {
            let next = u - self.backward.output(self.forward.output(e)?)?;
            if (next - e).abs() <= FEEDBACK_TOL * (1.0 + e.abs()) {
                return Ok(next);
            }
            e = next;
        }
        Err(SrgError::Numerical(format!(
            "feedback loop did not converge within {FEEDBACK_MAX_ITER} iterations at input {u} (last error signal {e})"
        )))
    }
}

impl Stepper for FeedbackStep {
    fn output(&self, u: f64) -> Result<f64> {
        self.forward.output(self.solve(u)?)
    }
    fn advance(&mut self, u: f64) -> Result<()> {
        let e = self.solve(u)?;
        let y = self.forward.output(e)?;
        self.forward.advance(e)?;
        self.backward.advance(y)
    }
}

/// Builds the stepper for `op` on a grid of step `dt`.
pub fn build_stepper(op: &OperatorSpec, dt: f64, mode: OutputMode) -> Result<Box<dyn Stepper>> {
    Ok(match op {
        OperatorSpec::Static { map } => {
            map.validate()?;
            Box::new(StaticStep(map.clone()))
        }
        OperatorSpec::Gain { k } => Box::new(StaticStep(StaticMap::Linear { slope: *k })),
        OperatorSpec::Delay { t } => {
            if !(*t >= 0.0) {
                return Err(SrgError::InvalidParameter(format!("delay must be nonnegative, got {t}")));
            }
            let n = (t / dt).round() as usize;
            Box::new(DelayStep { buf: std::iter::repeat(0.0).take(n).collect() })
        }
        OperatorSpec::Lti { tf } => {
            let tf = tf.resolve()?;
            let lti = Box::new(LtiStep::new(&tf.clone().with_delay(0.0), dt, mode)?);
            if tf.delay > 0.0 {
                let d = build_stepper(&OperatorSpec::Delay { t: tf.delay }, dt, mode)?;
                Box::new(CascadeStep(vec![lti, d]))
            } else {
                lti
            }
        }
        OperatorSpec::Cascade { ops } => {
            Box::new(CascadeStep(ops.iter().map(|o| build_stepper(o, dt, mode)).collect::<Result<_>>()?))
        }
        OperatorSpec::NegFeedback { forward, backward } => Box::new(FeedbackStep {
            forward: build_stepper(forward, dt, mode)?,
            backward: build_stepper(backward, dt, mode)?,
        }),
        OperatorSpec::FirstOrderNl { f, g } => {
            f.validate()?;
            g.validate()?;
            Box::new(FirstOrderStep { f: f.clone(), g: g.clone(), y: 0.0, dt, mode })
        }
    })
}

pub fn apply_operator_with(op: &OperatorSpec, u: &Signal, mode: OutputMode) -> Result<Signal> {
    let mut s = build_stepper(op, u.dt, mode)?;
    let mut out = Vec::with_capacity(u.len());
    for &v in &u.samples {
        out.push(s.output(v)?);
        s.advance(v)?;
    }
    if out.iter().any(|v| !v.is_finite()) {
        return Err(SrgError::Numerical("simulation produced a non-finite output".into()));
    }
    Ok(Signal { dt: u.dt, samples: out })
}

/// Simulates `op` from zero initial state; outputs are point samples.
pub fn apply_operator(op: &OperatorSpec, u: &Signal) -> Result<Signal> {
    apply_operator_with(op, u, OutputMode::Sample)
}

/// Empirical SRG point `gain·e^{±j angle}`. `gain = ∞` marks a multivalued pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZPoint {
    pub gain: f64,
    pub angle: f64,
    /// Set when the output increment vanishes and the angle is a convention.
    #[serde(default)]
    pub degenerate: bool,
}

impl ZPoint {
    pub fn is_infinite(&self) -> bool {
        self.gain.is_infinite()
    }

    /// Upper half-plane representative.
    pub fn to_complex(&self) -> Complex64 {
        if self.degenerate {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar(self.gain, self.angle)
        }
    }
}

/// `None` when both increments vanish.
pub fn z_point(u1: &Signal, u2: &Signal, y1: &Signal, y2: &Signal) -> Result<Option<ZPoint>> {
    let n = u1.len();
    if [u2.len(), y1.len(), y2.len()].iter().any(|&m| m != n) || [u2.dt, y1.dt, y2.dt].iter().any(|&d| d != u1.dt) {
        return Err(SrgError::InvalidParameter("signals must share length and dt".into()));
    }
    let du = u1.sub(u2);
    let dy = y1.sub(y2);
    let (nu, ny) = (du.norm(), dy.norm());
    if nu == 0.0 {
        return Ok((ny > 0.0).then_some(ZPoint { gain: f64::INFINITY, angle: 0.0, degenerate: false }));
    }
    if ny == 0.0 {
        return Ok(Some(ZPoint { gain: 0.0, angle: PI / 2.0, degenerate: true }));
    }
    let c = (du.inner(&dy) / (nu * ny)).clamp(-1.0, 1.0);
    Ok(Some(ZPoint { gain: ny / nu, angle: c.acos(), degenerate: false }))
}

/// Two-level probe about an elbow at `u_star`: the reference is constant
/// `u_star` on `[0, 1]`, the other input is `u_star + eps` before `tau` and
/// `u_star - eps` after.
pub fn elbow_probe(u_star: f64, eps: f64, tau: f64, dt: f64, horizon: f64) -> (Signal, Signal) {
    let u1 = Signal::from_fn(dt, horizon, |t| if t < 1.0 { u_star } else { 0.0 });
    let u2 = Signal::from_fn(dt, horizon, |t| {
        if t < tau {
            u_star + eps
        } else if t < 1.0 {
            u_star - eps
        } else {
            0.0
        }
    });
    (u1, u2)
}

/// Large-signal probe: the reference is constant `m`, the other input is
/// `m + u_star` before `tau` and `0` after.
pub fn level_probe(u_star: f64, m: f64, tau: f64, dt: f64, horizon: f64) -> (Signal, Signal) {
    let u1 = Signal::from_fn(dt, horizon, |t| if t < 1.0 { m } else { 0.0 });
    let u2 = Signal::from_fn(dt, horizon, |t| if t < tau { m + u_star } else { 0.0 });
    (u1, u2)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareWaveConfig {
    pub u_star: f64,
    pub eps: f64,
    /// Largest level of the large-signal family, as a multiple of `u_star`.
    pub m_ratio: f64,
    pub horizon: f64,
}

impl Default for SquareWaveConfig {
    fn default() -> Self {
        SquareWaveConfig { u_star: 1.0, eps: 0.25, m_ratio: 100.0, horizon: 1.0 }
    }
}

/// Sinusoids faded in with a raised cosine over the first tenth of the horizon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SinusoidConfig {
    pub omegas: Vec<f64>,
    pub horizon: f64,
    pub amplitude: f64,
    pub bias: f64,
}

impl Default for SinusoidConfig {
    fn default() -> Self {
        SinusoidConfig { omegas: vec![0.0, 0.1, 0.3, 1.0, 3.0, 10.0], horizon: 200.0, amplitude: 1.0, bias: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomConfig {
    /// Length of each constant piece.
    pub hold: f64,
    /// Duration of the nonzero part of each input.
    pub active: f64,
    /// Total simulated duration, including a zero tail.
    pub horizon: f64,
    pub amplitude: f64,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig { hold: 0.25, active: 10.0, horizon: 20.0, amplitude: 2.0 }
    }
}

/// Probe families for [`sample_srg`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum Strategy {
    SquareWavePairs(SquareWaveConfig),
    SinusoidPairs(SinusoidConfig),
    RandomPc(RandomConfig),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimSettings {
    pub dt: f64,
    pub seed: u64,
}

impl Default for SimSettings {
    fn default() -> Self {
        SimSettings { dt: DEFAULT_DT, seed: 0 }
    }
}

/// Generator for probe `i`, independent of evaluation order.
fn probe_rng(seed: u64, i: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(i as u64);
    r
}

/// Input pair number `i` of a strategy.
pub fn probe_pair(strategy: &Strategy, settings: &SimSettings, i: usize) -> (Signal, Signal) {
    let dt = settings.dt;
    let mut rng = probe_rng(settings.seed, i);
    match strategy {
        Strategy::SquareWavePairs(c) => {
            let steps = (1.0 / dt).round() as usize;
            let tau = rng.gen_range(0..=steps) as f64 * dt;
            if i % 2 == 0 {
                elbow_probe(c.u_star, c.eps, tau, dt, c.horizon)
            } else {
                let m = c.u_star * (rng.gen::<f64>() * c.m_ratio.ln()).exp();
                level_probe(c.u_star, m, tau, dt, c.horizon)
            }
        }
        Strategy::SinusoidPairs(c) => {
            let w = c.omegas[i % c.omegas.len()];
            let phase = rng.gen::<f64>() * 2.0 * PI;
            let u1 = Signal::constant(dt, c.horizon, c.bias);
            let ramp = 0.1 * c.horizon;
            let u2 = Signal::from_fn(dt, c.horizon, |t| {
                let tm = t + 0.5 * dt;
                let env = if tm < ramp { 0.5 * (1.0 - (PI * tm / ramp).cos()) } else { 1.0 };
                let wave = if w == 0.0 { 1.0 } else { (w * tm + phase).sin() };
                c.bias + c.amplitude * env * wave
            });
            (u1, u2)
        }
        Strategy::RandomPc(c) => {
            let pieces = ((c.active / c.hold).round() as usize).max(1);
            let mut draw = || -> Vec<f64> { (0..pieces).map(|_| rng.gen_range(-c.amplitude..=c.amplitude)).collect() };
            let (a, b) = (draw(), draw());
            let make = |v: &[f64]| {
                Signal::from_fn(dt, c.horizon, |t| {
                    let k = ((t + 0.5 * dt) / c.hold) as usize;
                    if k < pieces {
                        v[k]
                    } else {
                        0.0
                    }
                })
            };
            (make(&a), make(&b))
        }
    }
}

/// Empirical SRG points from `n` probe pairs; pairs with no output and no
/// input difference are skipped.
pub fn sample_srg(op: &OperatorSpec, strategy: &Strategy, n: usize, settings: &SimSettings) -> Result<Vec<ZPoint>> {
    let pts: Vec<Option<ZPoint>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (u1, u2) = probe_pair(strategy, settings, i);
            let y1 = apply_operator_with(op, &u1, OutputMode::Average)?;
            let y2 = apply_operator_with(op, &u2, OutputMode::Average)?;
            z_point(&u1, &u2, &y1, &y2)
        })
        .collect::<Result<_>>()?;
    Ok(pts.into_iter().flatten().collect())
}

/// Scaled-graph points about the fixed input `u_star`: each probe pair
/// contributes its second input measured against `u_star`.
pub fn sample_sg(
    op: &OperatorSpec,
    u_star: &Signal,
    strategy: &Strategy,
    n: usize,
    settings: &SimSettings,
) -> Result<Vec<ZPoint>> {
    let y_star = apply_operator_with(op, u_star, OutputMode::Average)?;
    let pts: Vec<Option<ZPoint>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (_, u) = probe_pair(strategy, settings, i);
            let u = fit(&u, u_star);
            let y = apply_operator_with(op, &u, OutputMode::Average)?;
            z_point(&u, u_star, &y, &y_star)
        })
        .collect::<Result<_>>()?;
    Ok(pts.into_iter().flatten().collect())
}

/// Pads or truncates `u` to the length of `like`.
fn fit(u: &Signal, like: &Signal) -> Signal {
    let mut s = u.samples.clone();
    s.resize(like.len(), 0.0);
    Signal { dt: like.dt, samples: s }
}

/// Union of scaled graphs about constant inputs at each of `levels`.
pub fn sample_sg_equilibria(
    op: &OperatorSpec,
    levels: &[f64],
    horizon: f64,
    strategy: &Strategy,
    n: usize,
    settings: &SimSettings,
) -> Result<Vec<ZPoint>> {
    let mut out = Vec::new();
    for &l in levels {
        out.extend(sample_sg(op, &Signal::constant(settings.dt, horizon, l), strategy, n, settings)?);
    }
    Ok(out)
}

/// Current-voltage curve with a negative-slope middle section, sampled from
/// `u³/3 − u` on `[-3, 3]`.
pub fn negative_resistor_table() -> StaticMap {
    StaticMap::Table {
        points: (-12..=12)
            .map(|k| {
                let u = k as f64 * 0.25;
                (u, u * u * u / 3.0 - u)
            })
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub index: usize,
    pub point: ZPoint,
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub checked: usize,
    /// Signed distance per point: positive inside the region.
    pub slacks: Vec<f64>,
    pub violations: Vec<Violation>,
    pub min_slack: f64,
    pub pass: bool,
}

/// Signed distance of a z-point to `region`; infinite points count as inside
/// exactly when the region contains `∞`.
pub fn point_slack(p: &ZPoint, region: &Region) -> f64 {
    if p.is_infinite() {
        return if region.includes_infinity { f64::INFINITY } else { f64::NEG_INFINITY };
    }
    let z = p.to_complex();
    if region.contains(z) {
        region.signed_distance(z).max(0.0)
    } else {
        -region.point_distance(z)
    }
}

pub fn check_inclusion(points: &[ZPoint], region: &Region, tol: f64) -> Result<InclusionReport> {
    if !(tol > 0.0) {
        return Err(SrgError::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let slacks: Vec<f64> = points.par_iter().map(|p| point_slack(p, region)).collect();
    let violations: Vec<Violation> = slacks
        .iter()
        .enumerate()
        .filter(|(_, s)| **s < -tol)
        .map(|(i, s)| Violation { index: i, point: points[i], slack: *s })
        .collect();
    let min_slack = slacks.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(InclusionReport { checked: points.len(), pass: violations.is_empty(), slacks, violations, min_slack })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sat() -> OperatorSpec {
        OperatorSpec::Static { map: StaticMap::Saturation { limit: 1.0 } }
    }

    #[test]
    fn operator_examples() {
        let y = apply_operator(&sat(), &Signal::constant(DEFAULT_DT, 1.0, 2.0)).unwrap();
        assert!(y.samples.iter().all(|v| *v == 1.0));
        let u = Signal::from_fn(DEFAULT_DT, 1.0, |t| t + 1.0);
        let y = apply_operator(&OperatorSpec::Delay { t: 0.25 }, &u).unwrap();
        assert!(y.samples[..64].iter().all(|v| *v == 0.0));
        assert_eq!(&y.samples[64..], &u.samples[..192]);
        let lag = OperatorSpec::Lti { tf: TfSpec::Expr("1/(s+1)".into()) };
        let y = apply_operator(&lag, &Signal::constant(DEFAULT_DT, 2.0, 1.0)).unwrap();
        assert!((y.samples[256] - (1.0 - (-1.0f64).exp())).abs() < 1e-9);
    }

    #[test]
    fn average_mode_matches_integral() {
        let lag = OperatorSpec::Lti { tf: TfSpec::Expr("1/(s+1)".into()) };
        let y = apply_operator_with(&lag, &Signal::constant(0.5, 1.0, 1.0), OutputMode::Average).unwrap();
        // ∫_0^0.5 (1 - e^{-t}) dt / 0.5
        let exact = (0.5 - (1.0 - (-0.5f64).exp())) / 0.5;
        assert!((y.samples[0] - exact).abs() < 1e-12);
    }

    #[test]
    fn feedback_fixed_point() {
        let loop_op = OperatorSpec::NegFeedback { forward: Box::new(sat()), backward: Box::new(OperatorSpec::Gain { k: 0.5 }) };
        let y = apply_operator(&loop_op, &Signal::constant(DEFAULT_DT, 0.1, 0.3)).unwrap();
        assert!((y.samples[0] - 0.2).abs() < 1e-12);
        let bad = OperatorSpec::NegFeedback {
            forward: Box::new(OperatorSpec::Gain { k: 2.0 }),
            backward: Box::new(OperatorSpec::Gain { k: 1.0 }),
        };
        assert!(matches!(apply_operator(&bad, &Signal::constant(DEFAULT_DT, 0.1, 1.0)), Err(SrgError::Numerical(_))));
    }

    #[test]
    fn z_point_examples() {
        let (u1, u2) = elbow_probe(1.0, 0.25, 0.5, DEFAULT_DT, 1.0);
        let y1 = apply_operator(&sat(), &u1).unwrap();
        let y2 = apply_operator(&sat(), &u2).unwrap();
        let z = z_point(&u1, &u2, &y1, &y2).unwrap().unwrap();
        assert!((z.to_complex() - Complex64::new(0.5, 0.5)).norm() < 1e-12);
        let zero = Signal::constant(DEFAULT_DT, 1.0, 0.0);
        let one = Signal::constant(DEFAULT_DT, 1.0, 1.0);
        let d = z_point(&zero, &one, &zero, &zero).unwrap().unwrap();
        assert!(d.degenerate && d.gain == 0.0 && d.angle == PI / 2.0);
        assert!(z_point(&zero, &zero, &zero, &one).unwrap().unwrap().is_infinite());
        assert!(z_point(&zero, &zero, &zero, &zero).unwrap().is_none());
        let k = OperatorSpec::Gain { k: 3.0 };
        let pts = sample_srg(&k, &Strategy::RandomPc(RandomConfig::default()), 8, &SimSettings::default()).unwrap();
        assert!(pts.iter().all(|p| (p.gain - 3.0).abs() < 1e-12 && p.angle.abs() < 1e-6));
    }

    #[test]
    fn inclusion_report() {
        let p = ZPoint { gain: 2f64.sqrt(), angle: PI / 4.0, degenerate: false };
        let r = check_inclusion(&[p], &Region::disc(0.5, 0.5), 1e-9).unwrap();
        assert!(!r.pass);
        assert!((r.violations[0].slack + (0.5f64.powi(2) + 1.0).sqrt() - 0.5).abs() < 1e-12);
        assert!((r.min_slack + 0.618).abs() < 1e-3);
    }

    #[test]
    fn json_schema() {
        let s = r#"{"type":"neg_feedback","forward":{"type":"static","map":{"kind":"saturation"}},"backward":{"type":"gain","k":0.5}}"#;
        let op = OperatorSpec::from_json(s).unwrap();
        assert_eq!(OperatorSpec::from_json(&op.to_json().unwrap()).unwrap(), op);
        let lti = OperatorSpec::from_json(r#"{"type":"lti","tf":"exp(-0.5*s)/(s+1)"}"#).unwrap();
        assert_eq!(lti.snapped_delays(DEFAULT_DT), vec![(0.5, 0.5)]);
        let coeffs = OperatorSpec::from_json(r#"{"type":"lti","tf":{"num":[1],"den":[1,1]}}"#).unwrap();
        assert!(matches!(coeffs, OperatorSpec::Lti { tf: TfSpec::Coeffs(_) }));
    }
}
