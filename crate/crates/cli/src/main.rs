//! `srgkit` command-line interface.

mod output;
mod repro;
mod spec;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use srgkit::feedback::{nyquist_stability, robust_feedback, tau_grid, Verdict};
use srgkit::sim::{
    check_inclusion, sample_srg, OperatorSpec, RandomConfig, SimSettings, SinusoidConfig, SquareWaveConfig, Strategy,
    ZPoint, DEFAULT_DT,
};
use srgkit::srg::{cascade_srg, class_srg, lti_srg, lti_srg_exact, nyquist_curve, static_srg, OperatorClass, StaticKind};
use srgkit::{parse_tf, FreqGrid, Region, SrgError};

use output::{emit, exit_code, num, read, Csv, EXIT_FAIL, EXIT_OK};
use svg::{frame_points, Bounds, Plot};

#[derive(Parser)]
#[command(name = "srgkit", version, about = "Scaled relative graph analysis of feedback systems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build an SRG region and print it as JSON.
    #[command(subcommand)]
    Srg(SrgCmd),
    /// Run the interconnection described by an analysis document.
    Analyze { spec: PathBuf },
    /// Stability margin and incremental gain bound of a loop.
    Margin(LoopArgs),
    /// Write the separation distance for every homotopy parameter.
    SweepTau {
        #[command(flatten)]
        lp: LoopArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate an operator and collect empirical SRG points.
    Sample(SampleArgs),
    /// Plot regions, a Nyquist curve and point clouds.
    Plot(PlotArgs),
    /// Reproduce a worked example as CSV and SVG.
    #[command(subcommand)]
    Repro(ReproCmd),
}

#[derive(Args, Clone)]
struct GridArgs {
    #[arg(long, default_value_t = 1e-3)]
    wmin: f64,
    #[arg(long, default_value_t = 1e3)]
    wmax: f64,
    #[arg(long, default_value_t = 2048)]
    wpoints: usize,
}

impl GridArgs {
    fn grid(&self) -> Result<FreqGrid> {
        Ok(FreqGrid::new(self.wmin, self.wmax, self.wpoints)?)
    }
}

#[derive(Args)]
struct RegionOut {
    /// Region JSON destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassKind {
    GainBound,
    IncrementallyPositive,
    InputStrict,
    OutputStrict,
    Sector,
}

#[derive(Clone, Copy, ValueEnum)]
enum StaticShape {
    Elbow,
    Saturation,
    Relu,
    SaturatingDisc,
}

#[derive(Subcommand)]
enum SrgCmd {
    /// SRG of an operator class.
    Class {
        #[arg(long, value_enum)]
        kind: ClassKind,
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[command(flatten)]
        out: RegionOut,
    },
    /// SRG of a stable transfer function.
    Lti {
        #[arg(long)]
        tf: String,
        #[command(flatten)]
        grid: GridArgs,
        /// Keep holes instead of filling the hull.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        out: RegionOut,
    },
    /// SRG of a static nonlinearity.
    Static {
        #[arg(long, value_enum)]
        kind: StaticShape,
        #[arg(long)]
        u_star: Option<f64>,
        #[arg(long)]
        s_u_star: Option<f64>,
        #[command(flatten)]
        out: RegionOut,
    },
    /// SRG bound for a cascade of output-strict systems.
    Cascade {
        #[arg(long, value_delimiter = ',', required = true)]
        gammas: Vec<f64>,
        #[command(flatten)]
        out: RegionOut,
    },
}

#[derive(Args)]
struct LoopArgs {
    /// Loop transfer function for a Nyquist check.
    #[arg(long, conflicts_with_all = ["loop_region", "h1", "h2"])]
    tf: Option<String>,
    /// Loop region JSON for a Nyquist check.
    #[arg(long = "loop", conflicts_with_all = ["h1", "h2"])]
    loop_region: Option<PathBuf>,
    /// Forward region JSON for a two-block loop.
    #[arg(long, requires = "h2")]
    h1: Option<PathBuf>,
    /// Feedback region JSON for a two-block loop.
    #[arg(long, requires = "h1")]
    h2: Option<PathBuf>,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 128)]
    taus: usize,
    #[arg(long)]
    svg: Option<PathBuf>,
}

enum Loop {
    Nyquist(Region, Option<Vec<Complex64>>),
    Robust(Region, Region),
}

impl LoopArgs {
    fn build(&self) -> Result<(Loop, String)> {
        if let Some(tf) = &self.tf {
            let g = parse_tf(tf)?;
            let grid = self.grid.grid()?;
            let r = lti_srg(&g, &grid)?;
            let curve = nyquist_curve(&g, &grid)?;
            return Ok((Loop::Nyquist(r, Some(curve)), format!("nyquist, tf {g}, omega {} points on [{}, {}]", grid.points, grid.wmin, grid.wmax)));
        }
        if let Some(p) = &self.loop_region {
            return Ok((Loop::Nyquist(load_region(p)?, None), format!("nyquist, loop {}", p.display())));
        }
        match (&self.h1, &self.h2) {
            (Some(a), Some(b)) => Ok((
                Loop::Robust(load_region(a)?, load_region(b)?),
                format!("robust feedback, h1 {}, h2 {}", a.display(), b.display()),
            )),
            _ => bail!(SrgError::InvalidParameter("give --tf, --loop, or both --h1 and --h2".into())),
        }
    }

    fn verdict(&self, l: &Loop) -> Result<Verdict> {
        if self.taus == 0 {
            bail!(SrgError::InvalidParameter("tau grid is empty".into()));
        }
        let taus = tau_grid(self.taus);
        Ok(match l {
            Loop::Nyquist(r, _) => nyquist_stability(r, &taus)?,
            Loop::Robust(a, b) => robust_feedback(a, b, &taus)?,
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyKind {
    Square,
    Sinusoid,
    Random,
}

#[derive(Args)]
struct SampleArgs {
    /// Operator JSON document.
    #[arg(long)]
    op: PathBuf,
    #[arg(long, value_enum, default_value = "random")]
    strategy: StrategyKind,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_DT)]
    dt: f64,
    /// Simulated duration; defaults to 1 (square), 200 (sinusoid) or 20 (random).
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    u_star: f64,
    #[arg(long, default_value_t = 0.25)]
    eps: f64,
    #[arg(long, default_value_t = 100.0)]
    m_ratio: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.1, 0.3, 1.0, 3.0, 10.0])]
    omegas: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
    #[arg(long, default_value_t = 0.0)]
    bias: f64,
    #[arg(long, default_value_t = 0.25)]
    hold: f64,
    /// Check every point against this region JSON.
    #[arg(long)]
    region: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    /// Region JSON files, drawn in order.
    #[arg(long)]
    region: Vec<PathBuf>,
    /// Overlay the Nyquist curve of a transfer function.
    #[arg(long)]
    tf: Option<String>,
    #[command(flatten)]
    grid: GridArgs,
    /// Point cloud CSV written by `sample`.
    #[arg(long)]
    cloud: Option<PathBuf>,
    /// Mark a real point, such as -1.
    #[arg(long, allow_hyphen_values = true)]
    mark: Option<f64>,
    #[arg(long, default_value = "SRG")]
    title: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ReproCmd {
    /// Certified beta against delay for s^2/(s^3+2s^2+2s+1).
    Delay {
        #[arg(long, default_value_t = 0.05)]
        tmin: f64,
        #[arg(long, default_value_t = 3.0)]
        tmax: f64,
        #[arg(long, default_value_t = 60)]
        tpoints: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Cascade SRGs, the inverse cascade SRG and the secant condition.
    Cascade {
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Congestion control bound against delay.
    Congestion {
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        #[arg(long, default_value_t = 0.0)]
        tmin: f64,
        #[arg(long, default_value_t = 3.0)]
        tmax: f64,
        #[arg(long, default_value_t = 31)]
        tpoints: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// SRG and Nyquist curve of 1/(s^3+5s^2+2s+1).
    ThirdOrder {
        #[arg(long, default_value = repro::THIRD_ORDER)]
        tf: String,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

fn load_region(p: &Path) -> Result<Region> {
    Region::from_json(&read(p)?).with_context(|| format!("region {}", p.display()))
}

fn need(v: Option<f64>, name: &str) -> Result<f64> {
    v.ok_or_else(|| SrgError::InvalidParameter(format!("--{name} is required for this kind")).into())
}

fn region_plot(r: &Region, title: &str) -> String {
    let mut plot = Plot::new(Bounds::around(&frame_points(r, 50.0)), title);
    plot.fill_region(r, "#bbbbbb");
    plot.boundary(r, "black");
    plot.finish()
}

fn emit_region(r: &Region, out: &RegionOut, title: &str) -> Result<u8> {
    emit(out.out.as_deref(), &(r.to_json_pretty()? + "\n"))?;
    if let Some(p) = &out.svg {
        emit(Some(p), &region_plot(r, title))?;
    }
    Ok(EXIT_OK)
}

fn srg(cmd: SrgCmd) -> Result<u8> {
    match cmd {
        SrgCmd::Class { kind, mu, lambda, gamma, out } => {
            let c = match kind {
                ClassKind::GainBound => OperatorClass::GainBound { mu: need(mu, "mu")? },
                ClassKind::IncrementallyPositive => OperatorClass::IncrementallyPositive,
                ClassKind::InputStrict => OperatorClass::InputStrict { lambda: need(lambda, "lambda")? },
                ClassKind::OutputStrict => OperatorClass::OutputStrict { gamma: need(gamma, "gamma")? },
                ClassKind::Sector => OperatorClass::Sector { mu: need(mu, "mu")?, lambda: need(lambda, "lambda")? },
            };
            emit_region(&class_srg(c)?, &out, &format!("{c:?}"))
        }
        SrgCmd::Lti { tf, grid, exact, out } => {
            let g = parse_tf(&tf)?;
            let grid = grid.grid()?;
            let r = if exact { lti_srg_exact(&g, &grid)? } else { lti_srg(&g, &grid)? };
            emit(out.out.as_deref(), &(r.to_json_pretty()? + "\n"))?;
            if let Some(p) = &out.svg {
                let curve = srgkit::transferfn::frequency_response(&g, &grid)?;
                let full: Vec<Complex64> = curve.iter().map(|s| s.value).collect();
                let mut plot = Plot::new(Bounds::around(&full), &format!("SRG of {g}"));
                plot.fill_region(&r, "#bbbbbb");
                plot.polyline(&full, "black", 1.5);
                plot.polyline(&full.iter().map(|z| z.conj()).collect::<Vec<_>>(), "black", 1.5);
                emit(Some(p), &plot.finish())?;
            }
            Ok(EXIT_OK)
        }
        SrgCmd::Static { kind, u_star, s_u_star, out } => {
            let k = match kind {
                StaticShape::Elbow => StaticKind::ElbowCircle,
                StaticShape::Saturation => StaticKind::Saturation,
                StaticShape::Relu => StaticKind::Relu,
                StaticShape::SaturatingDisc => {
                    StaticKind::SaturatingDisc { u_star: need(u_star, "u-star")?, s_u_star: need(s_u_star, "s-u-star")? }
                }
            };
            emit_region(&static_srg(k)?, &out, &format!("{k:?}"))
        }
        SrgCmd::Cascade { gammas, out } => emit_region(&cascade_srg(&gammas)?, &out, &format!("Cascade {gammas:?}")),
    }
}

fn verdict_text(v: &Verdict) -> String {
    let mut s = format!("stable: {}\nmargin: {}\ngain_bound: {}\n", v.stable, num(v.margin), num(v.gain_bound));
    if let Some(g) = v.output_gain_bound {
        s.push_str(&format!("output_gain_bound: {}\n", num(g)));
    }
    for f in &v.conservatism_flags {
        s.push_str(&format!("flag: {f}\n"));
    }
    s
}

fn status(v: &Verdict) -> u8 {
    if v.stable {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn loop_plot(l: &Loop, v: &Verdict) -> Result<String> {
    let minus_one = Complex64::new(-1.0, 0.0);
    Ok(match l {
        Loop::Nyquist(r, curve) => {
            let mut pts = frame_points(r, 50.0);
            pts.push(minus_one);
            let mut plot = Plot::new(Bounds::around(&pts), "Loop SRG and the point -1");
            plot.fill_region(r, "#bbbbbb");
            if let Some(c) = curve {
                plot.polyline(c, "black", 1.5);
                plot.polyline(&c.iter().map(|z| z.conj()).collect::<Vec<_>>(), "black", 1.5);
            } else {
                plot.boundary(r, "black");
            }
            plot.marker(minus_one, "-1");
            if let Some(z) = repro::nearest_boundary(r, minus_one) {
                plot.segment(minus_one, z, &format!("s_m = {:.4}", v.margin));
            }
            plot.finish()
        }
        Loop::Robust(h1, h2) => {
            let a = srgkit::geom::region_invert(h1);
            let b = srgkit::geom::region_scale(h2, -1.0)?;
            let mut pts = frame_points(&a, 50.0);
            pts.extend(frame_points(&b, 50.0));
            let mut plot = Plot::new(Bounds::around(&pts), "Inverse forward SRG and negated feedback SRG");
            plot.fill_region(&a, "#9ecae1");
            plot.fill_region(&b, "#fdae6b");
            plot.boundary(&a, "#1f4e9c");
            plot.boundary(&b, "#c05000");
            plot.finish()
        }
    })
}

fn margin(lp: LoopArgs) -> Result<u8> {
    let (l, _) = lp.build()?;
    let v = lp.verdict(&l)?;
    print!("{}", verdict_text(&v));
    if let Some(p) = &lp.svg {
        emit(Some(p), &loop_plot(&l, &v)?)?;
    }
    Ok(status(&v))
}

fn sweep_tau(lp: LoopArgs, out: Option<PathBuf>) -> Result<u8> {
    let (l, desc) = lp.build()?;
    let v = lp.verdict(&l)?;
    let mut csv = Csv::new(&["tau", "r_tau"]);
    csv.comment(desc).comment(format!("tau grid: {} geometric points on [1e-4, 1]", lp.taus));
    csv.flags(&v.conservatism_flags);
    for (t, r) in &v.tau_trace {
        csv.row(vec![num(*t), num(*r)]);
    }
    csv.write(out.as_deref())?;
    if let Some(p) = &lp.svg {
        emit(Some(p), &loop_plot(&l, &v)?)?;
    }
    Ok(status(&v))
}

fn sample(a: SampleArgs) -> Result<u8> {
    let op = OperatorSpec::from_json(&read(&a.op)?)?;
    if a.n == 0 {
        bail!(SrgError::InvalidParameter("--n must be at least 1".into()));
    }
    let strategy = match a.strategy {
        StrategyKind::Square => Strategy::SquareWavePairs(SquareWaveConfig {
            u_star: a.u_star,
            eps: a.eps,
            m_ratio: a.m_ratio,
            horizon: a.horizon.unwrap_or(1.0),
        }),
        StrategyKind::Sinusoid => Strategy::SinusoidPairs(SinusoidConfig {
            omegas: a.omegas.clone(),
            horizon: a.horizon.unwrap_or(200.0),
            amplitude: a.amplitude,
            bias: a.bias,
        }),
        StrategyKind::Random => {
            let h = a.horizon.unwrap_or(20.0);
            Strategy::RandomPc(RandomConfig { hold: a.hold, active: h / 2.0, horizon: h, amplitude: a.amplitude })
        }
    };
    if let Strategy::SinusoidPairs(c) = &strategy {
        if c.omegas.is_empty() {
            bail!(SrgError::InvalidParameter("--omegas is empty".into()));
        }
    }
    if !(a.dt > 0.0) {
        bail!(SrgError::InvalidParameter(format!("dt must be positive, got {}", a.dt)));
    }
    let settings = SimSettings { dt: a.dt, seed: a.seed };
    let pts = sample_srg(&op, &strategy, a.n, &settings)?;
    let region = a.region.as_deref().map(load_region).transpose()?;
    let report = region.as_ref().map(|r| check_inclusion(&pts, r, a.tol)).transpose()?;

    let mut cols = vec!["gain", "angle"];
    if report.is_some() {
        cols.push("slack");
    }
    let mut csv = Csv::new(&cols);
    csv.comment(format!("operator: {}", op.to_json()?))
        .comment(format!("strategy: {}", serde_json::to_string(&strategy)?))
        .comment(format!("dt: {}, seed: {}, probes: {}, points: {}", a.dt, a.seed, a.n, pts.len()));
    let mut flags: Vec<String> = op
        .snapped_delays(a.dt)
        .into_iter()
        .filter(|(t, s)| t != s)
        .map(|(t, s)| format!("delay {t} snapped to {s}"))
        .collect();
    let degenerate = pts.iter().filter(|p| p.degenerate).count();
    if degenerate > 0 {
        flags.push(format!("{degenerate} points with zero output increment recorded at the origin"));
    }
    if let Some(r) = &report {
        csv.comment(format!("inclusion: tol {}, violations {}, min slack {}", a.tol, r.violations.len(), num(r.min_slack)));
    }
    csv.flags(&flags);
    for (i, p) in pts.iter().enumerate() {
        let mut row = vec![num(p.gain), num(p.angle)];
        if let Some(r) = &report {
            row.push(num(r.slacks[i]));
        }
        csv.row(row);
    }
    csv.write(a.out.as_deref())?;
    if let Some(p) = &a.svg {
        emit(Some(p), &cloud_plot(&pts, region.as_ref(), "Empirical SRG"))?;
    }
    if let Some(r) = &report {
        eprintln!("{} of {} points within tolerance, min slack {}", r.checked - r.violations.len(), r.checked, num(r.min_slack));
        if !r.pass {
            return Ok(EXIT_FAIL);
        }
    }
    Ok(EXIT_OK)
}

fn cloud_points(pts: &[ZPoint]) -> Vec<Complex64> {
    pts.iter().filter(|p| !p.is_infinite()).map(|p| p.to_complex()).collect()
}

fn cloud_plot(pts: &[ZPoint], region: Option<&Region>, title: &str) -> String {
    let zs = cloud_points(pts);
    let mut frame = zs.clone();
    if let Some(r) = region {
        frame.extend(frame_points(r, 50.0));
    }
    let mut plot = Plot::new(Bounds::around(&frame), title);
    if let Some(r) = region {
        plot.fill_region(r, "#bbbbbb");
        plot.boundary(r, "black");
    }
    plot.points(&zs, "#1f4e9c");
    plot.finish()
}

fn read_cloud(p: &Path) -> Result<Vec<ZPoint>> {
    let text = read(p)?;
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| SrgError::Serialization(format!("{} has no '{name}' column", p.display())))
    };
    let (gi, ai) = (col("gain")?, col("angle")?);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let parse = |i: usize| -> Result<f64> {
            rec.get(i).unwrap_or("").parse::<f64>().map_err(|e| SrgError::Serialization(format!("{}: {e}", p.display())).into())
        };
        let (gain, angle) = (parse(gi)?, parse(ai)?);
        out.push(ZPoint { gain, angle, degenerate: gain == 0.0 });
    }
    Ok(out)
}

fn plot(a: PlotArgs) -> Result<u8> {
    let regions: Vec<Region> = a.region.iter().map(|p| load_region(p)).collect::<Result<_>>()?;
    let curve = match &a.tf {
        Some(tf) => {
            let g = parse_tf(tf)?;
            let resp = srgkit::transferfn::frequency_response(&g, &a.grid.grid()?)?;
            Some(resp.into_iter().map(|s| s.value).collect::<Vec<_>>())
        }
        None => None,
    };
    let cloud = a.cloud.as_deref().map(read_cloud).transpose()?;
    let mut frame: Vec<Complex64> = regions.iter().flat_map(|r| frame_points(r, 50.0)).collect();
    if let Some(c) = &curve {
        frame.extend(c.iter().copied());
    }
    if let Some(c) = &cloud {
        frame.extend(cloud_points(c));
    }
    if let Some(m) = a.mark {
        frame.push(Complex64::new(m, 0.0));
    }
    let mut plot = Plot::new(Bounds::around(&frame), &a.title);
    let fills = ["#bbbbbb", "#9ecae1", "#fdae6b", "#a1d99b"];
    for (i, r) in regions.iter().enumerate() {
        plot.fill_region(r, fills[i % fills.len()]);
        plot.boundary(r, "#333");
    }
    if let Some(c) = &curve {
        plot.polyline(c, "black", 1.5);
        plot.polyline(&c.iter().map(|z| z.conj()).collect::<Vec<_>>(), "black", 1.5);
    }
    if let Some(c) = &cloud {
        plot.points(&cloud_points(c), "#1f4e9c");
    }
    if let Some(m) = a.mark {
        let z = Complex64::new(m, 0.0);
        plot.marker(z, &format!("{m}"));
        if let Some(r) = regions.first() {
            let d = srgkit::geom::region_distance(r, &Region::point(m))?;
            if let Some(w) = repro::nearest_boundary(r, z) {
                plot.segment(z, w, &format!("margin = {d:.4}"));
            }
        }
    }
    emit(a.out.as_deref(), &plot.finish())?;
    Ok(EXIT_OK)
}

fn analyze(path: &Path) -> Result<u8> {
    let spec = spec::AnalysisSpec::parse(&read(path)?)?;
    let (v, ops) = spec.run()?;
    let base = path.parent().unwrap_or(Path::new("."));
    let json = serde_json::to_string_pretty(&v)? + "\n";
    match &spec.outputs.verdict {
        Some(p) => emit(Some(&spec::resolve(base, p)), &json)?,
        None => print!("{}", verdict_text(&v)),
    }
    if let Some(p) = &spec.outputs.trace {
        let mut csv = Csv::new(&["tau", "r_tau"]);
        csv.comment(format!("analysis: {}", path.display())).comment(format!("tau grid: {} points", v.tau_trace.len()));
        csv.flags(&v.conservatism_flags);
        for (t, r) in &v.tau_trace {
            csv.row(vec![num(*t), num(*r)]);
        }
        csv.write(Some(&spec::resolve(base, p)))?;
    }
    if let Some(p) = &spec.outputs.svg {
        let l = match ops.as_slice() {
            [(_, r)] => Loop::Nyquist(r.clone(), None),
            [(_, a), (_, b)] => Loop::Robust(a.clone(), b.clone()),
            _ => unreachable!(),
        };
        emit(Some(&spec::resolve(base, p)), &loop_plot(&l, &v)?)?;
    }
    Ok(status(&v))
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Srg(c) => srg(c),
        Cmd::Analyze { spec } => analyze(&spec),
        Cmd::Margin(lp) => margin(lp),
        Cmd::SweepTau { lp, out } => sweep_tau(lp, out),
        Cmd::Sample(a) => sample(a),
        Cmd::Plot(a) => plot(a),
        Cmd::Repro(r) => {
            match r {
                ReproCmd::Delay { tmin, tmax, tpoints, out_dir } => repro::delay(&out_dir, tmin, tmax, tpoints)?,
                ReproCmd::Cascade { gamma, n_max, out_dir } => repro::cascade(&out_dir, gamma, n_max)?,
                ReproCmd::Congestion { beta, gamma, tmin, tmax, tpoints, out_dir } => {
                    repro::congestion(&out_dir, beta, gamma, tmin, tmax, tpoints)?
                }
                ReproCmd::ThirdOrder { tf, grid, out_dir } => repro::third_order(&out_dir, &tf, &grid.grid()?)?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { output::EXIT_INPUT } else { EXIT_OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
