//! Minimal self-contained SVG charts: line and scatter series on linear or
//! log axes.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 72.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Line,
    Scatter,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
}

impl Series {
    pub fn line(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            name: name.into(),
            points,
            style: Style::Line,
        }
    }

    pub fn scatter(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            name: name.into(),
            points,
            style: Style::Scatter,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Axis {
    pub label: String,
    pub log: bool,
}

impl Axis {
    pub fn linear(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            log: false,
        }
    }

    pub fn log(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            log: true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x: Axis,
    pub y: Axis,
    pub series: Vec<Series>,
}

/// Data range mapped onto the frame, in (possibly log10) axis units.
struct Scale {
    lo: f64,
    hi: f64,
    log: bool,
    ticks: Vec<f64>,
    step: f64,
}

impl Scale {
    fn new(values: impl Iterator<Item = f64>, log: bool) -> Self {
        let (mut lo, mut hi) = values
            .map(|v| if log { v.log10() } else { v })
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        if hi - lo < 1e-12 * lo.abs().max(1.0) {
            let pad = if log { 0.5 } else { (lo.abs() * 0.1).max(0.5) };
            lo -= pad;
            hi += pad;
        }
        let step = if log {
            ((hi - lo) / 6.0).ceil().max(1.0)
        } else {
            nice_step((hi - lo) / 5.0)
        };
        let lo = (lo / step).floor() * step;
        let hi = (hi / step).ceil() * step;
        let count = ((hi - lo) / step).round() as usize;
        let ticks = (0..=count).map(|k| lo + k as f64 * step).collect();
        Self {
            lo,
            hi,
            log,
            ticks,
            step,
        }
    }

    fn frac(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    fn label(&self, t: f64) -> String {
        if self.log {
            return format!("1e{}", t.round() as i64);
        }
        let decimals = (-self.step.log10().floor()).max(0.0) as usize;
        let s = format!("{t:.decimals$}");
        // Avoid "-0".
        if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
            s.trim_start_matches('-').to_string()
        } else {
            s
        }
    }
}

fn nice_step(raw: f64) -> f64 {
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    let below = |t: f64| f <= t * (1.0 + 1e-9);
    let nice = if below(1.0) {
        1.0
    } else if below(2.0) {
        2.0
    } else if below(2.5) {
        2.5
    } else if below(5.0) {
        5.0
    } else {
        10.0
    };
    nice * mag
}

pub(crate) fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

fn validate(plot: &Plot) -> Result<()> {
    if plot.series.is_empty() {
        return Err(Error::Plot("nothing to plot: no series given".into()));
    }
    let mut problems = Vec::new();
    for s in &plot.series {
        if s.points.is_empty() {
            problems.push(format!("`{}` is empty", s.name));
        } else if let Some(k) = s.points.iter().position(|(x, y)| !x.is_finite() || !y.is_finite()) {
            problems.push(format!("`{}` has a non-finite value at point {k}", s.name));
        } else if let Some(k) = s
            .points
            .iter()
            .position(|&(x, y)| (plot.x.log && x <= 0.0) || (plot.y.log && y <= 0.0))
        {
            problems.push(format!("`{}` has a non-positive value on a log axis at point {k}", s.name));
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::Plot(format!("bad series: {}", problems.join("; "))))
    }
}

pub fn render_svg(plot: &Plot) -> Result<String> {
    validate(plot)?;
    let all = || plot.series.iter().flat_map(|s| s.points.iter());
    let sx = Scale::new(all().map(|p| p.0), plot.x.log);
    let sy = Scale::new(all().map(|p| p.1), plot.y.log);
    let (fw, fh) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let px = |x: f64| LEFT + sx.frac(x) * fw;
    let py = |y: f64| TOP + (1.0 - sy.frac(y)) * fh;

    let mut o = String::new();
    let w = &mut o;
    // Writing into a String cannot fail.
    macro_rules! out {
        ($($t:tt)*) => { writeln!(w, $($t)*).expect("writing to a String") };
    }
    out!(r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    out!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    out!(r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    out!(
        r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(&plot.title)
    );
    for &t in &sx.ticks {
        let x = LEFT + (t - sx.lo) / (sx.hi - sx.lo) * fw;
        out!(
            r##"<line x1="{x:.2}" y1="{TOP:.2}" x2="{x:.2}" y2="{:.2}" stroke="#e6e6e6"/>"##,
            TOP + fh
        );
        out!(
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + fh + 16.0,
            sx.label(t)
        );
    }
    for &t in &sy.ticks {
        let y = TOP + (1.0 - (t - sy.lo) / (sy.hi - sy.lo)) * fh;
        out!(
            r##"<line x1="{LEFT:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#e6e6e6"/>"##,
            LEFT + fw
        );
        out!(
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            y + 4.0,
            sy.label(t)
        );
    }
    out!(r#"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{fw:.2}" height="{fh:.2}" fill="none" stroke="black"/>"#);
    out!(
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + fw / 2.0,
        HEIGHT - 14.0,
        escape(&plot.x.label)
    );
    out!(
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        TOP + fh / 2.0,
        TOP + fh / 2.0,
        escape(&plot.y.label)
    );

    for (k, s) in plot.series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        out!(r#"<g data-series="{}">"#, escape(&s.name));
        if s.style == Style::Line && s.points.len() > 1 {
            let pts: Vec<String> = s
                .points
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
                .collect();
            out!(
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                pts.join(" ")
            );
        }
        let r = if s.style == Style::Line { 2.5 } else { 3.5 };
        for &(x, y) in &s.points {
            out!(r#"<circle cx="{:.2}" cy="{:.2}" r="{r}" fill="{color}"/>"#, px(x), py(y));
        }
        out!("</g>");
    }

    if plot.series.len() > 1 || !plot.series[0].name.is_empty() {
        for (k, s) in plot.series.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let y = TOP + 14.0 + 16.0 * k as f64;
            let x = LEFT + fw - 150.0;
            out!(r#"<rect x="{x:.2}" y="{:.2}" width="10" height="10" fill="{color}"/>"#, y - 9.0);
            out!(r#"<text x="{:.2}" y="{y:.2}">{}</text>"#, x + 16.0, escape(&s.name));
        }
    }
    out!("</svg>");
    Ok(o)
}

pub fn emit_svg_plot(plot: &Plot, path: &Path) -> Result<()> {
    super::write_file(path, &render_svg(plot)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plot(series: Vec<Series>) -> Plot {
        Plot {
            title: "E vs p".into(),
            x: Axis::linear("p"),
            y: Axis::linear("E"),
            series,
        }
    }

    #[test]
    fn single_point_gets_one_marker() {
        let svg = render_svg(&plot(vec![Series::line("a", vec![(0.5, 0.3)])])).unwrap();
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(!svg.contains("<polyline"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn output_is_deterministic() {
        let p = plot(vec![
            Series::line("quantum", vec![(0.0, 0.2), (0.5, 0.9), (1.0, 0.7)]),
            Series::scatter("classical", vec![(0.1, 0.4), (0.7, 0.6)]),
        ]);
        assert_eq!(render_svg(&p).unwrap(), render_svg(&p).unwrap());
    }

    #[test]
    fn bad_series_are_named() {
        let p = plot(vec![
            Series::line("good", vec![(0.0, 1.0)]),
            Series::line("broken", vec![(0.0, f64::NAN)]),
            Series::line("hollow", vec![]),
        ]);
        let msg = render_svg(&p).unwrap_err().to_string();
        assert!(msg.contains("broken") && msg.contains("hollow") && !msg.contains("good"), "{msg}");

        let mut p = plot(vec![Series::line("zero", vec![(1.0, 0.0)])]);
        p.y.log = true;
        assert!(render_svg(&p).unwrap_err().to_string().contains("zero"));
        assert!(render_svg(&plot(vec![])).is_err());
    }

    #[test]
    fn labels_are_escaped() {
        let mut p = plot(vec![Series::line("a<b & c", vec![(1.0, 1.0), (2.0, 3.0)])]);
        p.x = Axis::log("N");
        p.y = Axis::log("E");
        let svg = render_svg(&p).unwrap();
        assert!(svg.contains("a&lt;b &amp; c"));
        assert!(svg.contains("1e0"));
    }

    #[test]
    fn nice_steps() {
        assert_eq!(nice_step(0.2), 0.2);
        assert_eq!(nice_step(0.03), 0.05);
        assert_eq!(nice_step(7.0), 10.0);
    }
}
