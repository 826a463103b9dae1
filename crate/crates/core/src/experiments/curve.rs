use std::fmt;

use super::{run_tasks, RunOptions};
use crate::dynamics::{select_tbar, transfer_efficiency, InitialState, Integrator};
use crate::error::{Error, Result};
use crate::graph::{check_probability, generate_graph, Graph, PerturbMode, TopologySpec};

/// Quantity on the horizontal axis of a curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Abscissa {
    P,
    R,
    N,
    LinksChanged,
}

impl Abscissa {
    pub fn label(self) -> &'static str {
        match self {
            Abscissa::P => "p",
            Abscissa::R => "r",
            Abscissa::N => "N",
            Abscissa::LinksChanged => "links_changed",
        }
    }
}

impl fmt::Display for Abscissa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    /// Mean of `per_seed`, summed in seed order.
    pub mean: f64,
    pub per_seed: Vec<f64>,
}

/// Everything needed to rerun a curve bit for bit.
#[derive(Clone, Debug, PartialEq)]
pub struct Provenance {
    pub topology: TopologySpec,
    /// Link perturbation applied after construction, with its count.
    pub perturbation: Option<(PerturbMode, usize)>,
    /// Realization seeds; a single entry for deterministic families.
    pub seeds: Vec<u64>,
    pub t_bar: f64,
    /// No probe reached the t-bar threshold within the doubling cap.
    pub tbar_saturated: bool,
    pub gamma: f64,
    pub sink: usize,
    pub convention: crate::dynamics::AmplitudeConvention,
    pub initial: InitialState,
    pub integrator: Integrator,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EfficiencyCurve {
    pub abscissa: Abscissa,
    pub points: Vec<CurvePoint>,
    pub provenance: Provenance,
}

impl EfficiencyCurve {
    pub fn xs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.x).collect()
    }

    pub fn means(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.mean).collect()
    }

    /// `max - min` of the mean efficiency.
    pub fn flatness(&self) -> f64 {
        let m = self.means();
        let hi = m.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = m.iter().copied().fold(f64::INFINITY, f64::min);
        hi - lo
    }
}

pub(crate) fn check_grid(p_grid: &[f64]) -> Result<()> {
    if p_grid.is_empty() {
        return Err(Error::param("p_grid", "needs at least one value"));
    }
    p_grid.iter().try_for_each(|&p| check_probability("p", p))
}

/// Seeds that give distinct realizations of `spec`.
pub(crate) fn realization_seeds(spec: &TopologySpec, seeds: &[u64]) -> Result<Vec<u64>> {
    if !spec.topology.is_stochastic() {
        return Ok(vec![spec.seed]);
    }
    if seeds.is_empty() {
        return Err(Error::param("seeds", "a random family needs at least one seed"));
    }
    Ok(seeds.to_vec())
}

pub(crate) fn build_graphs(
    seeds: &[u64],
    threads: usize,
    build: impl Fn(u64) -> Result<Graph> + Sync,
) -> Result<Vec<Graph>> {
    run_tasks(seeds, threads, |&seed| build(seed).map_err(|e| e.in_task(None, seed)))
}

/// Sink at the last node, `initial` checked against the node count.
pub(crate) fn sink_and_start(g: &Graph, initial: InitialState) -> Result<usize> {
    let n = g.n_nodes();
    if let InitialState::Site(s) = initial {
        if s >= n {
            return Err(Error::param(
                "site",
                format!("initial site {s} is not a node of a {n}-node graph"),
            ));
        }
    }
    Ok(n - 1)
}

/// `E(p, t_bar)` for every graph and grid value, averaged over graphs.
pub(crate) fn sweep_graphs(
    graphs: &[Graph],
    seeds: &[u64],
    initial: InitialState,
    p_grid: &[f64],
    t_bar: f64,
    opts: &RunOptions,
) -> Result<Vec<CurvePoint>> {
    let tasks: Vec<(usize, f64)> = (0..graphs.len())
        .flat_map(|g| p_grid.iter().map(move |&p| (g, p)))
        .collect();
    let values = run_tasks(&tasks, opts.threads, |&(k, p)| {
        let g = &graphs[k];
        let cfg = opts.config(p, sink_and_start(g, initial)?);
        transfer_efficiency(g, &cfg, initial, t_bar, &opts.settings)
            .map_err(|e| e.in_task(Some(p), seeds[k]))
    })?;
    Ok(p_grid
        .iter()
        .enumerate()
        .map(|(j, &p)| {
            let per_seed: Vec<f64> = (0..graphs.len()).map(|k| values[k * p_grid.len() + j]).collect();
            CurvePoint {
                x: p,
                mean: mean(&per_seed),
                per_seed,
            }
        })
        .collect())
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Efficiency against `p` with the sink on the last node. Random families
/// are averaged over `seeds`; `t_bar` is picked once, on the first
/// realization, unless `opts` fixes it.
pub fn sweep_p(
    spec: &TopologySpec,
    initial: InitialState,
    p_grid: &[f64],
    seeds: &[u64],
    opts: &RunOptions,
) -> Result<EfficiencyCurve> {
    check_grid(p_grid)?;
    let seeds = realization_seeds(spec, seeds)?;
    let graphs = build_graphs(&seeds, opts.threads, |seed| generate_graph(&spec.with_seed(seed)))?;
    sweep_built(*spec, None, &graphs, &seeds, initial, p_grid, opts)
}

pub(crate) fn sweep_built(
    topology: TopologySpec,
    perturbation: Option<(PerturbMode, usize)>,
    graphs: &[Graph],
    seeds: &[u64],
    initial: InitialState,
    p_grid: &[f64],
    opts: &RunOptions,
) -> Result<EfficiencyCurve> {
    let first = &graphs[0];
    let sink = sink_and_start(first, initial)?;
    let (t_bar, tbar_saturated) = match opts.t_bar {
        Some(t) => (t, false),
        None => {
            let sel = select_tbar(first, &opts.config(0.0, sink), initial, &opts.settings)?;
            (sel.t_bar, sel.saturated)
        }
    };
    let points = sweep_graphs(graphs, seeds, initial, p_grid, t_bar, opts)?;
    Ok(EfficiencyCurve {
        abscissa: Abscissa::P,
        points,
        provenance: Provenance {
            topology,
            perturbation,
            seeds: seeds.to_vec(),
            t_bar,
            tbar_saturated,
            gamma: opts.gamma,
            sink,
            convention: opts.convention,
            initial,
            integrator: opts.settings.integrator,
        },
    })
}

/// A curve's maximum is called flat below this spread.
pub const FLAT_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Optimum {
    /// Refined location of the maximum.
    pub p_opt: f64,
    /// Largest sampled mean efficiency.
    pub e_max: f64,
    /// Index of the sampled maximum in the curve (ties go to smaller `p`).
    pub grid_index: usize,
    pub flat: bool,
}

pub fn find_p_opt(curve: &EfficiencyCurve) -> Result<Optimum> {
    if curve.abscissa != Abscissa::P {
        return Err(Error::param("curve", format!("expected a curve over p, got one over {}", curve.abscissa)));
    }
    locate_optimum(&curve.xs(), &curve.means())
}

/// Grid argmax, refined by one golden-section search on the parabola
/// through the maximum and its two neighbours.
pub fn locate_optimum(xs: &[f64], ys: &[f64]) -> Result<Optimum> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::param("curve", "needs at least 3 points"));
    }
    if ys.iter().chain(xs).any(|v| !v.is_finite()) {
        return Err(Error::param("curve", "contains non-finite values"));
    }
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let x: Vec<f64> = order.iter().map(|&k| xs[k]).collect();
    let y: Vec<f64> = order.iter().map(|&k| ys[k]).collect();

    let mut best = 0;
    for k in 1..y.len() {
        if y[k] > y[best] {
            best = k;
        }
    }
    let lo = y.iter().copied().fold(f64::INFINITY, f64::min);
    let flat = y[best] - lo < FLAT_TOLERANCE;
    let grid_index = order[best];
    let mut p_opt = x[best];
    if !flat && best > 0 && best + 1 < x.len() {
        let (x0, x1, x2) = (x[best - 1], x[best], x[best + 1]);
        let (y0, y1, y2) = (y[best - 1], y[best], y[best + 1]);
        let q = |t: f64| {
            y0 * (t - x1) * (t - x2) / ((x0 - x1) * (x0 - x2))
                + y1 * (t - x0) * (t - x2) / ((x1 - x0) * (x1 - x2))
                + y2 * (t - x0) * (t - x1) / ((x2 - x0) * (x2 - x1))
        };
        let candidate = golden_max(q, x0, x2);
        if q(candidate) >= y1 {
            p_opt = candidate;
        }
    }
    Ok(Optimum {
        p_opt,
        e_max: y[best],
        grid_index,
        flat,
    })
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let tol = 1e-10 * (b - a).abs().max(1e-300);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::default_p_grid;

    #[test]
    fn synthetic_parabola() {
        let xs = default_p_grid();
        let ys: Vec<f64> = xs.iter().map(|p| 1.0 - (p - 0.3) * (p - 0.3)).collect();
        let opt = locate_optimum(&xs, &ys).unwrap();
        assert!((opt.p_opt - 0.3).abs() < 0.025);
        assert!(!opt.flat);
        // Off-grid maximum is recovered by the refinement.
        let ys: Vec<f64> = xs.iter().map(|p| 1.0 - (p - 0.33) * (p - 0.33)).collect();
        assert!((locate_optimum(&xs, &ys).unwrap().p_opt - 0.33).abs() < 1e-6);
    }

    #[test]
    fn monotone_and_flat_curves() {
        let xs = default_p_grid();
        let down: Vec<f64> = xs.iter().map(|p| 1.0 - p).collect();
        assert_eq!(locate_optimum(&xs, &down).unwrap().p_opt, 0.0);
        let up: Vec<f64> = xs.iter().map(|p| p * p).collect();
        assert_eq!(locate_optimum(&xs, &up).unwrap().p_opt, 1.0);
        let flat = vec![0.5; xs.len()];
        let opt = locate_optimum(&xs, &flat).unwrap();
        assert!(opt.flat);
        assert_eq!(opt.p_opt, 0.0);
    }

    #[test]
    fn ties_go_to_smaller_p() {
        let xs = [0.0, 0.25, 0.5, 0.75, 1.0];
        let ys = [0.1, 0.9, 0.2, 0.9, 0.1];
        assert_eq!(locate_optimum(&xs, &ys).unwrap().grid_index, 1);
    }

    #[test]
    fn grid_argmax_survives_monotone_rescaling() {
        let xs = default_p_grid();
        let ys: Vec<f64> = xs.iter().map(|p| (-(p - 0.12f64).powi(2) * 9.0).exp() * 0.9).collect();
        let base = locate_optimum(&xs, &ys).unwrap();
        for f in [|y: f64| y.powi(3), |y: f64| y.ln(), |y: f64| 2.0 * y - 1.0] {
            let t: Vec<f64> = ys.iter().map(|&y| f(y)).collect();
            let opt = locate_optimum(&xs, &t).unwrap();
            assert_eq!(opt.grid_index, base.grid_index);
            assert!((opt.p_opt - base.p_opt).abs() <= 0.05);
        }
        let affine: Vec<f64> = ys.iter().map(|y| 3.0 * y + 0.2).collect();
        assert!((locate_optimum(&xs, &affine).unwrap().p_opt - base.p_opt).abs() < 1e-8);
    }

    #[test]
    fn needs_three_points() {
        assert!(locate_optimum(&[0.0, 1.0], &[0.2, 0.3]).is_err());
    }
}
