//! Seeded force-directed drawing of a graph.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::svg::escape;
use crate::graph::Graph;

pub const LAYOUT_ITERATIONS: usize = 300;

/// Fruchterman-Reingold positions in the unit square. The same graph and
/// seed always give the same drawing.
pub fn force_layout(g: &Graph, seed: u64, iterations: usize) -> Vec<(f64, f64)> {
    let n = g.n_nodes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<(f64, f64)> = (0..n).map(|_| (rng.random::<f64>(), rng.random::<f64>())).collect();
    if n < 2 {
        return pos.into_iter().map(|_| (0.5, 0.5)).collect();
    }
    let k = (1.0 / n as f64).sqrt();
    let mut disp = vec![(0.0, 0.0); n];
    for it in 0..iterations {
        let temp = 0.1 * (1.0 - it as f64 / iterations as f64) + 1e-4;
        disp.iter_mut().for_each(|d| *d = (0.0, 0.0));
        for i in 0..n {
            for j in i + 1..n {
                let (dx, dy) = (pos[i].0 - pos[j].0, pos[i].1 - pos[j].1);
                let d2 = (dx * dx + dy * dy).max(1e-9);
                let f = k * k / d2;
                disp[i].0 += dx * f;
                disp[i].1 += dy * f;
                disp[j].0 -= dx * f;
                disp[j].1 -= dy * f;
            }
        }
        for &(i, j) in g.edges() {
            let (dx, dy) = (pos[i].0 - pos[j].0, pos[i].1 - pos[j].1);
            let d = (dx * dx + dy * dy).sqrt().max(1e-9);
            let f = d / k;
            disp[i].0 -= dx * f;
            disp[i].1 -= dy * f;
            disp[j].0 += dx * f;
            disp[j].1 += dy * f;
        }
        for (p, d) in pos.iter_mut().zip(&disp) {
            let len = (d.0 * d.0 + d.1 * d.1).sqrt().max(1e-12);
            let step = len.min(temp);
            p.0 += d.0 / len * step;
            p.1 += d.1 / len * step;
        }
    }
    normalize(pos)
}

fn normalize(pos: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pos {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    pos.into_iter()
        .map(|(x, y)| ((x - x0) / span, (y - y0) / span))
        .collect()
}

/// Draws `g` at `pos` (unit square). `marks` colours selected nodes, e.g.
/// the initial site and the sink.
pub fn render_graph_svg(g: &Graph, pos: &[(f64, f64)], title: &str, marks: &[(usize, &str)]) -> String {
    const SIZE: f64 = 600.0;
    const PAD: f64 = 30.0;
    let at = |i: usize| (PAD + pos[i].0 * (SIZE - 2.0 * PAD), PAD + pos[i].1 * (SIZE - 2.0 * PAD));
    let r = if g.n_nodes() > 100 { 3.0 } else { 5.0 };
    let mut o = String::new();
    let w = &mut o;
    macro_rules! out {
        ($($t:tt)*) => { writeln!(w, $($t)*).expect("writing to a String") };
    }
    out!(r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    out!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="13">"#
    );
    out!(r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    out!(r#"<text x="{PAD}" y="20">{}</text>"#, escape(title));
    out!(r##"<g stroke="#999" stroke-width="0.8">"##);
    for &(i, j) in g.edges() {
        let ((x1, y1), (x2, y2)) = (at(i), at(j));
        out!(r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#);
    }
    out!("</g>");
    for i in 0..g.n_nodes() {
        let (x, y) = at(i);
        let fill = marks.iter().find(|m| m.0 == i).map_or("#333", |m| m.1);
        let radius = if fill == "#333" { r } else { r * 1.8 };
        out!(r#"<circle cx="{x:.2}" cy="{y:.2}" r="{radius}" fill="{fill}"/>"#);
    }
    out!("</svg>");
    o
}
