use qsw_core::dynamics::{evolve_qsw, select_tbar, InitialState, QswConfig};
use qsw_core::experiments::{derive_seeds, find_p_opt, sweep_p, uniform_grid, RunOptions};
use qsw_core::graph::{compute_metrics, generate_graph, read_graph, write_graph, Graph};
use qsw_core::io::{force_layout, render_graph_svg, Axis, Plot, Series, Table, LAYOUT_ITERATIONS};
use qsw_core::{Error, Result};

use crate::config::RunConfig;
use crate::output::{curve_means, curve_per_seed, f, Output};

pub struct Context {
    pub run: RunConfig,
    pub threads: usize,
    pub threads_from_env: bool,
}

impl Context {
    pub fn output(&self, prefix: &str) -> Result<Output> {
        Output::new(&self.run, prefix, self.threads, self.threads_from_env)
    }

    pub fn options(&self) -> RunOptions {
        let cli = &self.run.cli;
        RunOptions {
            gamma: cli.gamma,
            convention: cli.convention(),
            settings: cli.sweep_settings(),
            t_bar: cli.t_final,
            threads: self.threads,
        }
    }

    fn graph(&self, out: &mut Output) -> Result<Graph> {
        let cli = &self.run.cli;
        match &cli.graph {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                    path: path.clone(),
                    source: e,
                })?;
                out.manifest.set("graph_file", path.display());
                read_graph(&text)
            }
            None => {
                let spec = cli.spec();
                out.manifest.set("topology", spec);
                generate_graph(&spec)
            }
        }
    }

    /// 0-based sink, defaulting to the last node.
    fn sink(&self, n: usize) -> Result<usize> {
        match self.run.cli.sink {
            None => Ok(n - 1),
            Some(s) if s <= n => Ok(s - 1),
            Some(s) => Err(Error::param("sink", format!("site {s} exceeds the {n} nodes"))),
        }
    }

    fn initial(&self, n: usize) -> Result<InitialState> {
        self.run.cli.site.resolve(n).map_err(|e| Error::param("site", e))
    }
}

/// Sites as written in outputs: 1-based, or `average`.
pub fn site_label(s: InitialState) -> String {
    match s {
        InitialState::Site(k) => (k + 1).to_string(),
        InitialState::Uniform => "average".into(),
    }
}

pub fn draw_graph(out: &mut Output, name: &str, g: &Graph, title: &str, seed: u64, sink: usize) -> Result<()> {
    let pos = force_layout(g, seed, LAYOUT_ITERATIONS);
    let marks = [(0, "#2ca02c"), (sink, "#d62728")];
    out.text(&format!("{name}.svg"), &render_graph_svg(g, &pos, title, &marks))?;
    out.text(&format!("{name}.txt"), &write_graph(g))
}

pub fn generate(ctx: &Context) -> Result<()> {
    let mut out = ctx.output("")?;
    let g = ctx.graph(&mut out)?;
    out.manifest.set("nodes", g.n_nodes());
    out.manifest.set("edges", g.n_edges());
    let title = out.manifest.get("topology").unwrap_or("graph").to_string();
    draw_graph(&mut out, "graph", &g, &title, ctx.run.cli.seed, g.n_nodes() - 1)?;
    out.finish()?;
    Ok(())
}

pub fn metrics(ctx: &Context) -> Result<()> {
    let mut out = ctx.output("")?;
    let g = ctx.graph(&mut out)?;
    let m = compute_metrics(&g)?;
    let mut t = Table::new([
        "nodes",
        "edges",
        "diameter",
        "char_path_length",
        "clustering",
        "max_degree",
        "mean_degree",
        "spectral_gap",
        "distinct_eigenvalues",
    ]);
    let mean_degree = 2.0 * g.n_edges() as f64 / g.n_nodes() as f64;
    t.push(vec![
        g.n_nodes().to_string(),
        g.n_edges().to_string(),
        m.diameter.to_string(),
        f(m.char_path_length),
        f(m.clustering),
        g.max_degree().to_string(),
        f(mean_degree),
        f(m.spectral_gap),
        m.distinct_eigenvalues.to_string(),
    ])?;
    out.csv("metrics.csv", &t)?;
    let mut s = Table::new(["index", "eigenvalue"]);
    for (k, v) in m.eigenvalues.iter().enumerate() {
        s.push(vec![(k + 1).to_string(), f(*v)])?;
    }
    out.csv("spectrum.csv", &s)?;
    let mut d = Table::new(["node", "degree"]);
    for (k, deg) in m.degrees.iter().enumerate() {
        d.push(vec![(k + 1).to_string(), deg.to_string()])?;
    }
    out.csv("degrees.csv", &d)?;
    out.finish()?;
    Ok(())
}

pub fn evolve(ctx: &Context) -> Result<()> {
    let cli = &ctx.run.cli;
    let mut out = ctx.output("")?;
    let g = ctx.graph(&mut out)?;
    let n = g.n_nodes();
    let initial = ctx.initial(n)?;
    let cfg = QswConfig {
        p: cli.p,
        gamma: cli.gamma,
        sink: ctx.sink(n)?,
        convention: cli.convention(),
    };
    let settings = cli.trajectory_settings();
    let t_final = match cli.t_final {
        Some(t) => t,
        None => {
            let sel = select_tbar(&g, &cfg, initial, &cli.sweep_settings())?;
            out.manifest.set("t_bar_saturated", sel.saturated);
            sel.t_bar
        }
    };
    let traj = evolve_qsw(&g, &cfg, initial, t_final, &settings)?;
    for (k, v) in [
        ("p", f(cfg.p)),
        ("gamma", f(cfg.gamma)),
        ("convention", cfg.convention.to_string()),
        ("sink", (cfg.sink + 1).to_string()),
        ("initial", site_label(initial)),
        ("t_final", f(t_final)),
        ("integrator", traj.integrator.to_string()),
        ("max_drift", format!("{:e}", traj.max_drift)),
        ("final_efficiency", f(traj.final_efficiency())),
    ] {
        out.manifest.set(k, v);
    }

    let mut header = vec!["time".to_string(), "efficiency".to_string()];
    if traj.populations.is_some() {
        header.extend((1..=n).map(|i| format!("rho_{i}_{i}")));
    }
    let mut t = Table::new(header);
    for (k, (&time, &e)) in traj.times.iter().zip(&traj.efficiency).enumerate() {
        let mut row = vec![f(time), f(e)];
        if let Some(pops) = &traj.populations {
            row.extend(pops[k].iter().map(|&x| f(x)));
        }
        t.push(row)?;
    }
    out.csv("trajectory.csv", &t)?;
    let plot = Plot {
        title: format!("E(t) at p = {}", cfg.p),
        x: Axis::linear("t"),
        y: Axis::linear("E"),
        series: vec![Series::line("", traj.times.iter().copied().zip(traj.efficiency.iter().copied()).collect())],
    };
    out.svg("trajectory.svg", &plot)?;
    out.finish()?;
    Ok(())
}

pub fn sweep(ctx: &Context) -> Result<()> {
    let cli = &ctx.run.cli;
    let mut out = ctx.output("")?;
    if cli.graph.is_some() {
        return Err(Error::param("graph", "sweep builds its own realizations; use --topology"));
    }
    let spec = cli.spec();
    let n = spec.topology.n_nodes();
    if let Some(s) = cli.sink.filter(|&s| s != n) {
        return Err(Error::param("sink", format!("sweeps use the last node ({n}) as sink, got {s}")));
    }
    let initial = ctx.initial(n)?;
    let seeds = derive_seeds(cli.seed, cli.seeds);
    let curve = sweep_p(&spec, initial, &uniform_grid(cli.p_grid), &seeds, &ctx.options())?;
    let opt = find_p_opt(&curve)?;
    for (k, v) in [
        ("topology", spec.to_string()),
        ("initial", site_label(initial)),
        ("sink", n.to_string()),
        ("t_bar", f(curve.provenance.t_bar)),
        ("t_bar_saturated", curve.provenance.tbar_saturated.to_string()),
        ("gamma", f(cli.gamma)),
        ("convention", cli.convention().to_string()),
        ("integrator", curve.provenance.integrator.to_string()),
        ("realizations", curve.provenance.seeds.len().to_string()),
        ("p_opt", f(opt.p_opt)),
        ("e_max", f(opt.e_max)),
        ("flat", opt.flat.to_string()),
    ] {
        out.manifest.set(k, v);
    }
    let rows = [(vec![], &curve)];
    out.csv("sweep.csv", &curve_means(&[], &rows)?)?;
    out.csv("sweep_per_seed.csv", &curve_per_seed(&[], &rows)?)?;
    out.svg(
        "sweep.svg",
        &Plot {
            title: format!("E(p) on {spec}, p_opt = {:.3}", opt.p_opt),
            x: Axis::linear("p"),
            y: Axis::linear("E"),
            series: vec![Series::line("", curve.xs().into_iter().zip(curve.means()).collect())],
        },
    )?;
    out.finish()?;
    Ok(())
}
