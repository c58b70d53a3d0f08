//! Minimal deterministic SVG writer for complex-plane plots and line charts.

use std::fmt::Write;

use num_complex::Complex64;
use srgkit::Region;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 40.0;
const FILL_CELLS: usize = 160;

#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Bounds {
    pub fn around(points: &[Complex64]) -> Self {
        let mut b = Bounds { x0: f64::INFINITY, x1: f64::NEG_INFINITY, y0: f64::INFINITY, y1: f64::NEG_INFINITY };
        for z in points.iter().filter(|z| z.re.is_finite() && z.im.is_finite()) {
            b.x0 = b.x0.min(z.re);
            b.x1 = b.x1.max(z.re);
            b.y0 = b.y0.min(z.im.min(-z.im));
            b.y1 = b.y1.max(z.im.max(-z.im));
        }
        if !b.x0.is_finite() {
            b = Bounds { x0: -1.0, x1: 1.0, y0: -1.0, y1: 1.0 };
        }
        b.square(0.1)
    }

    /// Equal scales on both axes, padded by `pad` of the span.
    fn square(self, pad: f64) -> Self {
        let span = (self.x1 - self.x0).max(self.y1 - self.y0).max(1e-6) * (1.0 + 2.0 * pad);
        let (cx, cy) = ((self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0);
        Bounds { x0: cx - span / 2.0, x1: cx + span / 2.0, y0: cy - span / 2.0, y1: cy + span / 2.0 }
    }
}

/// Points that frame a region: its boundary samples, clipped to `clip` in modulus.
pub fn frame_points(r: &Region, clip: f64) -> Vec<Complex64> {
    r.boundary_samples().into_iter().filter(|z| z.norm() <= clip).collect()
}

fn f(v: f64) -> String {
    format!("{v:.2}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub struct Plot {
    b: Bounds,
    body: String,
    title: String,
}

impl Plot {
    pub fn new(b: Bounds, title: &str) -> Self {
        Plot { b, body: String::new(), title: title.to_string() }
    }

    fn px(&self, z: Complex64) -> (f64, f64) {
        let x = MARGIN + (z.re - self.b.x0) / (self.b.x1 - self.b.x0) * SIZE;
        let y = MARGIN + (self.b.y1 - z.im) / (self.b.y1 - self.b.y0) * SIZE;
        (x, y)
    }

    fn visible(&self, (x, y): (f64, f64)) -> bool {
        let lim = 4.0 * SIZE;
        x.abs() < lim && y.abs() < lim
    }

    /// Shades the cells of a grid whose centres lie in `r`, merged into runs.
    pub fn fill_region(&mut self, r: &Region, color: &str) {
        let cell = SIZE / FILL_CELLS as f64;
        let (dx, dy) = ((self.b.x1 - self.b.x0) / FILL_CELLS as f64, (self.b.y1 - self.b.y0) / FILL_CELLS as f64);
        let _ = writeln!(self.body, "<g fill=\"{color}\" fill-opacity=\"0.45\" stroke=\"none\">");
        for j in 0..FILL_CELLS {
            let im = self.b.y1 - (j as f64 + 0.5) * dy;
            let mut run: Option<usize> = None;
            for i in 0..=FILL_CELLS {
                let inside = i < FILL_CELLS && r.contains(Complex64::new(self.b.x0 + (i as f64 + 0.5) * dx, im));
                match (inside, run) {
                    (true, None) => run = Some(i),
                    (false, Some(s)) => {
                        let _ = writeln!(
                            self.body,
                            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
                            f(MARGIN + s as f64 * cell),
                            f(MARGIN + j as f64 * cell),
                            f((i - s) as f64 * cell),
                            f(cell)
                        );
                        run = None;
                    }
                    _ => {}
                }
            }
        }
        self.body.push_str("</g>\n");
    }

    pub fn boundary(&mut self, r: &Region, color: &str) {
        for c in r.boundary_curves() {
            let pts = c.sample(400);
            self.polyline(&pts, color, 1.2);
        }
    }

    pub fn polyline(&mut self, pts: &[Complex64], color: &str, width: f64) {
        let mut seg: Vec<String> = Vec::new();
        let flush = |seg: &mut Vec<String>, body: &mut String| {
            if seg.len() > 1 {
                let _ = writeln!(
                    body,
                    "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"{width}\" points=\"{}\"/>",
                    seg.join(" ")
                );
            }
            seg.clear();
        };
        for z in pts {
            let p = self.px(*z);
            if z.re.is_finite() && z.im.is_finite() && self.visible(p) {
                seg.push(format!("{},{}", f(p.0), f(p.1)));
            } else {
                flush(&mut seg, &mut self.body);
            }
        }
        flush(&mut seg, &mut self.body);
    }

    /// Plots each point together with its conjugate.
    pub fn points(&mut self, pts: &[Complex64], color: &str) {
        let _ = writeln!(self.body, "<g fill=\"{color}\">");
        for z in pts {
            for w in [*z, z.conj()] {
                let p = self.px(w);
                if self.visible(p) {
                    let _ = writeln!(self.body, "<circle cx=\"{}\" cy=\"{}\" r=\"1.5\"/>", f(p.0), f(p.1));
                }
            }
        }
        self.body.push_str("</g>\n");
    }

    pub fn marker(&mut self, z: Complex64, label: &str) {
        let (x, y) = self.px(z);
        let _ = writeln!(
            self.body,
            "<g><line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/><line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/><text x=\"{}\" y=\"{}\" font-size=\"11\">{}</text></g>",
            f(x - 4.0), f(y - 4.0), f(x + 4.0), f(y + 4.0), f(x - 4.0), f(y + 4.0), f(x + 4.0), f(y - 4.0),
            f(x + 6.0), f(y - 6.0), escape(label)
        );
    }

    /// Labelled segment, used for stability margins.
    pub fn segment(&mut self, a: Complex64, b: Complex64, label: &str) {
        let (pa, pb) = (self.px(a), self.px(b));
        let _ = writeln!(
            self.body,
            "<g><line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#c0392b\" stroke-width=\"1.5\"/><text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"#c0392b\">{}</text></g>",
            f(pa.0), f(pa.1), f(pb.0), f(pb.1),
            f((pa.0 + pb.0) / 2.0 + 4.0), f((pa.1 + pb.1) / 2.0 - 4.0), escape(label)
        );
    }

    fn axes(&self) -> String {
        let mut s = String::new();
        let (o0, o1) = (self.px(Complex64::new(self.b.x0, 0.0)), self.px(Complex64::new(self.b.x1, 0.0)));
        let (i0, i1) = (self.px(Complex64::new(0.0, self.b.y0)), self.px(Complex64::new(0.0, self.b.y1)));
        let _ = writeln!(
            s,
            "<g stroke=\"#888\" stroke-width=\"0.6\"><line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/><line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/></g>",
            f(o0.0), f(o0.1), f(o1.0), f(o1.1), f(i0.0), f(i0.1), f(i1.0), f(i1.1)
        );
        let _ = writeln!(
            s,
            "<g font-size=\"10\" fill=\"#444\"><text x=\"{}\" y=\"{}\">{}</text><text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text><text x=\"{}\" y=\"{}\">Im {}</text><text x=\"{}\" y=\"{}\">Im {}</text></g>",
            f(MARGIN), f(MARGIN + SIZE + 14.0), f(self.b.x0),
            f(MARGIN + SIZE), f(MARGIN + SIZE + 14.0), f(self.b.x1),
            f(MARGIN + 4.0), f(MARGIN + SIZE - 4.0), f(self.b.y0),
            f(MARGIN + 4.0), f(MARGIN + 12.0), f(self.b.y1)
        );
        s
    }

    pub fn finish(self) -> String {
        let total = SIZE + 2.0 * MARGIN;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{t}\" height=\"{t}\" viewBox=\"0 0 {t} {t}\">",
            t = f(total)
        );
        let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
        let _ = writeln!(s, "<text x=\"{}\" y=\"24\" font-size=\"13\">{}</text>", f(MARGIN), escape(&self.title));
        let _ = writeln!(
            s,
            "<clipPath id=\"frame\"><rect x=\"{m}\" y=\"{m}\" width=\"{w}\" height=\"{w}\"/></clipPath>",
            m = f(MARGIN),
            w = f(SIZE)
        );
        s.push_str(&self.axes());
        s.push_str("<g clip-path=\"url(#frame)\">\n");
        s.push_str(&self.body);
        s.push_str("</g>\n");
        let _ = writeln!(
            s,
            "<rect x=\"{m}\" y=\"{m}\" width=\"{w}\" height=\"{w}\" fill=\"none\" stroke=\"black\"/>",
            m = f(MARGIN),
            w = f(SIZE)
        );
        s.push_str("</svg>\n");
        s
    }
}

pub struct Series<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub data: Vec<(f64, f64)>,
}

/// Line chart of finite `(x, y)` data.
pub fn line_chart(title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> String {
    let pts: Vec<(f64, f64)> = series.iter().flat_map(|s| s.data.iter().copied()).filter(|p| p.0.is_finite() && p.1.is_finite()).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64, f64::NEG_INFINITY);
    for (x, y) in &pts {
        x0 = x0.min(*x);
        x1 = x1.max(*x);
        y0 = y0.min(*y);
        y1 = y1.max(*y);
    }
    if pts.is_empty() {
        (x0, x1, y1) = (0.0, 1.0, 1.0);
    }
    let y1 = y1 + 0.05 * (y1 - y0).max(1e-9);
    let (w, h) = (SIZE * 1.25, SIZE * 0.75);
    let px = |x: f64, y: f64| (MARGIN + (x - x0) / (x1 - x0).max(1e-12) * w, MARGIN + (y1 - y) / (y1 - y0).max(1e-12) * h);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        f(w + 2.0 * MARGIN), f(h + 2.0 * MARGIN), f(w + 2.0 * MARGIN), f(h + 2.0 * MARGIN)
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(s, "<text x=\"{}\" y=\"24\" font-size=\"13\">{}</text>", f(MARGIN), escape(title));
    let _ = writeln!(s, "<rect x=\"{m}\" y=\"{m}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>", f(w), f(h), m = f(MARGIN));
    let _ = writeln!(
        s,
        "<g font-size=\"10\" fill=\"#444\"><text x=\"{}\" y=\"{}\">{}</text><text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text><text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text><text x=\"4\" y=\"{}\">{}</text><text x=\"4\" y=\"{}\">{}</text><text x=\"4\" y=\"{}\">{}</text></g>",
        f(MARGIN), f(MARGIN + h + 14.0), f(x0),
        f(MARGIN + w), f(MARGIN + h + 14.0), f(x1),
        f(MARGIN + w / 2.0), f(MARGIN + h + 28.0), escape(xlabel),
        f(MARGIN + 4.0), f(y1),
        f(MARGIN + h), f(y0),
        f(MARGIN + h / 2.0), escape(ylabel)
    );
    for (k, se) in series.iter().enumerate() {
        let coords: Vec<String> = se
            .data
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|&(x, y)| {
                let (a, b) = px(x, y);
                format!("{},{}", f(a), f(b))
            })
            .collect();
        let _ = writeln!(
            s,
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>",
            se.color,
            coords.join(" ")
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"{}\">{}</text>",
            f(MARGIN + w - 150.0),
            f(MARGIN + 16.0 + 14.0 * k as f64),
            se.color,
            escape(se.label)
        );
    }
    s.push_str("</svg>\n");
    s
}
