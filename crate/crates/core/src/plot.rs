//! Static SVG 1.1 plots: line charts, a hexagonal density grid and violins.

use std::fmt::Write;

use crate::analysis::HexGrid;

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const COLORS: [&str; 7] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf",
];

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn header(out: &mut String, title: &str, x_label: &str, y_label: &str) {
    let _ = write!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">
<rect width="{W}" height="{H}" fill="white"/>
<text x="{:.1}" y="22" text-anchor="middle" font-size="15">{}</text>
<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>
<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>
"#,
        W / 2.0,
        esc(title),
        LEFT + (W - LEFT - RIGHT) / 2.0,
        H - 12.0,
        esc(x_label),
        TOP + (H - TOP - BOTTOM) / 2.0,
        TOP + (H - TOP - BOTTOM) / 2.0,
        esc(y_label),
    );
}

/// Maps data coordinates onto the plot area.
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        let pad = |a: f64, b: f64| {
            if (b - a).abs() < 1e-12 {
                (a - 0.5, b + 0.5)
            } else {
                (a, b)
            }
        };
        let (x0, x1) = pad(x0, x1);
        let (y0, y1) = pad(y0, y1);
        Self { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (W - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        H - BOTTOM - (y - self.y0) / (self.y1 - self.y0) * (H - TOP - BOTTOM)
    }

    fn axes(&self, out: &mut String, x_fmt: &dyn Fn(f64) -> String, y_fmt: &dyn Fn(f64) -> String) {
        let _ = writeln!(
            out,
            r#"<rect x="{LEFT}" y="{TOP}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
            W - LEFT - RIGHT,
            H - TOP - BOTTOM
        );
        for i in 0..=5 {
            let t = i as f64 / 5.0;
            let x = self.x0 + t * (self.x1 - self.x0);
            let y = self.y0 + t * (self.y1 - self.y0);
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
                self.px(x),
                H - BOTTOM + 16.0,
                esc(&x_fmt(x))
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
                LEFT - 6.0,
                self.py(y) + 4.0,
                esc(&y_fmt(y))
            );
        }
    }
}

fn tick(v: f64) -> String {
    if v.abs() >= 1000.0 || (v != 0.0 && v.abs() < 0.01) {
        format!("{v:.1e}")
    } else {
        format!("{v:.2}")
    }
}

pub struct Series<'a> {
    pub name: &'a str,
    pub points: Vec<(f64, f64)>,
}

/// Line chart. Log axes plot log10 of positive values; other points are
/// dropped.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series<'_>], log_x: bool, log_y: bool) -> String {
    let tx = |v: f64| if log_x { v.log10() } else { v };
    let ty = |v: f64| if log_y { v.log10() } else { v };
    let data: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|s| {
            s.points
                .iter()
                .filter(|(x, y)| (!log_x || *x > 0.0) && (!log_y || *y > 0.0))
                .map(|&(x, y)| (tx(x), ty(y)))
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .collect()
        })
        .collect();
    let all = data.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let frame = Frame::new(x0, x1, y0, y1);

    let mut out = String::new();
    header(&mut out, title, x_label, y_label);
    let fmt_x = move |v: f64| if log_x { tick(10f64.powf(v)) } else { tick(v) };
    let fmt_y = move |v: f64| if log_y { tick(10f64.powf(v)) } else { tick(v) };
    frame.axes(&mut out, &fmt_x, &fmt_y);
    for (i, (s, pts)) in series.iter().zip(&data).enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            path.join(" ")
        );
        let ly = TOP + 14.0 + 16.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            W - RIGHT - 30.0,
            W - RIGHT - 10.0,
            W - RIGHT - 34.0,
            ly + 4.0,
            esc(s.name)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Hexagons on offset rows, shaded by count.
pub fn hexbin_svg(grid: &HexGrid, title: &str, x_label: &str, y_label: &str) -> String {
    let frame = Frame::new(0.0, 100.0, 0.0, 100.0);
    let mut out = String::new();
    header(&mut out, title, x_label, y_label);
    frame.axes(&mut out, &tick, &tick);
    let max = grid.cells.iter().map(|c| c.count).max().unwrap_or(0).max(1) as f64;
    let cell_w = (frame.px(100.0) - frame.px(0.0)) / grid.bins.max(1) as f64;
    let cell_h = (frame.py(0.0) - frame.py(100.0)) / grid.bins.max(1) as f64;
    let r = (cell_w.min(cell_h) / 2.0) * 1.05;
    for (i, c) in grid.cells.iter().enumerate() {
        if c.count == 0 {
            continue;
        }
        let row = i / grid.bins;
        let shift = if row % 2 == 1 { cell_w / 4.0 } else { -cell_w / 4.0 };
        let cx = frame.px(c.x) + shift;
        let cy = frame.py(c.y);
        let pts: Vec<String> = (0..6)
            .map(|k| {
                let a = std::f64::consts::PI / 3.0 * k as f64 + std::f64::consts::PI / 6.0;
                format!("{:.2},{:.2}", cx + r * a.cos(), cy + r * a.sin())
            })
            .collect();
        let shade = 0.15 + 0.85 * (c.count as f64 / max);
        let _ = writeln!(
            out,
            r##"<polygon points="{}" fill="#1f4e9c" fill-opacity="{shade:.3}"><title>{}</title></polygon>"##,
            pts.join(" "),
            c.count
        );
    }
    out.push_str("</svg>\n");
    out
}

fn kde(sorted: &[f64], at: f64, bw: f64) -> f64 {
    let norm = 1.0 / (sorted.len() as f64 * bw * (2.0 * std::f64::consts::PI).sqrt());
    sorted
        .iter()
        .map(|x| (-0.5 * ((at - x) / bw).powi(2)).exp())
        .sum::<f64>()
        * norm
}

/// One violin per group on a 0–100 axis: a Gaussian density outline, a solid
/// line at the mean and dashed lines at the quartiles.
pub fn violin_svg(title: &str, y_label: &str, groups: &[(String, Vec<f64>)]) -> String {
    let frame = Frame::new(0.0, groups.len().max(1) as f64, 0.0, 100.0);
    let mut out = String::new();
    header(&mut out, title, "", y_label);
    frame.axes(&mut out, &|_| String::new(), &tick);
    let slot = frame.px(1.0) - frame.px(0.0);
    for (g, (name, values)) in groups.iter().enumerate() {
        let cx = frame.px(g as f64 + 0.5);
        let _ = writeln!(
            out,
            r#"<text x="{cx:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            H - BOTTOM + 16.0,
            esc(name)
        );
        if values.is_empty() {
            continue;
        }
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mean = sorted.iter().sum::<f64>() / n;
        let sd = (sorted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
        let bw = (1.06 * sd * n.powf(-0.2)).max(0.5);
        let steps = 80;
        let dens: Vec<(f64, f64)> = (0..=steps)
            .map(|k| {
                let y = 100.0 * k as f64 / steps as f64;
                (y, kde(&sorted, y, bw))
            })
            .collect();
        let peak = dens.iter().map(|d| d.1).fold(0.0, f64::max).max(1e-12);
        let half = slot * 0.42;
        let mut pts: Vec<String> = dens
            .iter()
            .map(|&(y, d)| format!("{:.2},{:.2}", cx + half * d / peak, frame.py(y)))
            .collect();
        pts.extend(
            dens.iter()
                .rev()
                .map(|&(y, d)| format!("{:.2},{:.2}", cx - half * d / peak, frame.py(y))),
        );
        let color = COLORS[g % COLORS.len()];
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="{color}" fill-opacity="0.35" stroke="{color}"/>"#,
            pts.join(" ")
        );
        let q = |p: f64| crate::affinity::quantile(&sorted, p);
        for (v, dash) in [(q(0.25), true), (q(0.5), true), (q(0.75), true), (mean, false)] {
            let stroke = if dash {
                r##"stroke="black" stroke-dasharray="4 3""##
            } else {
                r##"stroke="#d62728" stroke-width="2""##
            };
            let _ = writeln!(
                out,
                r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" {stroke}/>"#,
                cx - half,
                cx + half,
                y = frame.py(v)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
