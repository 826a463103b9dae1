//! `experiment --preset figK`: each preset fixes the network and initial
//! conditions of one figure. `--seeds`, `--p-grid`, `--samples`, `--gamma`,
//! `--convention`, `--integrator` and `--t-final` still apply.

use qsw_core::dynamics::{evolve_qsw, select_tbar, InitialState, QswConfig};
use qsw_core::experiments::{
    comparable_families, derive_seeds, diameter_efficiency_scan, effective_rewiring, find_p_opt,
    robustness_curve, scaling_study, small_world_sweep, sweep_p, uniform_grid, EfficiencyCurve,
    MatchStatus, RobustnessStudy,
};
use qsw_core::graph::{generate_graph, PerturbMode, Topology, TopologySpec};
use qsw_core::io::{Axis, Plot, Series, Table};
use qsw_core::Result;

use crate::commands::{draw_graph, site_label, Context};
use crate::config::Preset;
use crate::output::{curve_means, curve_per_seed, f, Output};

const LATTICE_SIDE: usize = 14;
const SCALING_SIZES: [usize; 4] = [15, 25, 35, 50];
const SCALING_P: [f64; 3] = [0.0, 0.1, 1.0];
/// `t_bar = c N` for the size scaling and the diameter scan.
const TIME_PER_NODE: f64 = 5.0;
const SMALL_WORLD_R: [f64; 5] = [0.0, 0.01, 0.1, 0.5, 1.0];
const EFFECTIVE_P: [f64; 11] = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.65, 0.7, 0.8, 0.9];
/// The pair compared in time: lattice walk at this p against a classical
/// walk on a small world with this rewiring.
const PAIR: (f64, f64) = (0.65, 0.09);
const LINK_COUNTS: [usize; 5] = [0, 10, 20, 30, 40];

fn lattice() -> Topology {
    Topology::square(LATTICE_SIDE)
}

fn line(name: impl Into<String>, c: &EfficiencyCurve) -> Series {
    Series::line(name, c.xs().into_iter().zip(c.means()).collect())
}

fn plot(title: &str, x: Axis, y: Axis, series: Vec<Series>) -> Plot {
    Plot {
        title: title.into(),
        x,
        y,
        series,
    }
}

fn e_of_p(title: &str, series: Vec<Series>) -> Plot {
    plot(title, Axis::linear("p"), Axis::linear("E(p, t_bar)"), series)
}

pub fn run(ctx: &Context, preset: Preset) -> Result<()> {
    let name = format!("{preset:?}").to_lowercase();
    let mut out = ctx.output(&format!("{name}_"))?;
    out.manifest.set("preset", &name);
    match preset {
        Preset::Fig1 => fig1(ctx, &mut out)?,
        Preset::Fig3 => initial_conditions(ctx, &mut out, lattice(), LATTICE_SIDE * (LATTICE_SIDE / 2) + LATTICE_SIDE / 2)?,
        Preset::Fig5 => fig5(ctx, &mut out)?,
        Preset::Fig6 => fig6(ctx, &mut out)?,
        Preset::Fig7 => fig7(ctx, &mut out)?,
        Preset::Fig8 => robustness(ctx, &mut out, PerturbMode::Rewire)?,
        Preset::Fig9 => robustness(ctx, &mut out, PerturbMode::Delete)?,
        Preset::Fig12 => fig12(ctx, &mut out)?,
        Preset::Fig13 => fig13(ctx, &mut out)?,
        Preset::Fig2 => layout(ctx, &mut out, lattice())?,
        Preset::Fig4 => layout(
            ctx,
            &mut out,
            Topology::SmallWorld {
                rows: LATTICE_SIDE,
                cols: LATTICE_SIDE,
                rewiring: 0.1,
            },
        )?,
        Preset::Fig10 => layout(ctx, &mut out, Topology::RandomRegular { rows: 10, cols: 20 })?,
        Preset::Fig11 => layout(ctx, &mut out, Topology::ScaleFree { n: 187, links: 2 })?,
    }
    out.finish()?;
    Ok(())
}

fn layout(ctx: &Context, out: &mut Output, t: Topology) -> Result<()> {
    let spec = TopologySpec::new(t, ctx.run.cli.seed);
    let g = generate_graph(&spec)?;
    out.manifest.set("topology", spec);
    draw_graph(out, "graph", &g, &spec.to_string(), ctx.run.cli.seed, g.n_nodes() - 1)
}

/// E(p) from an end site, a central site and averaged over all sites.
fn initial_conditions(ctx: &Context, out: &mut Output, t: Topology, center: usize) -> Result<()> {
    let cli = &ctx.run.cli;
    let spec = TopologySpec::new(t, 0);
    let grid = uniform_grid(cli.p_grid);
    let mut curves = Vec::new();
    for initial in [InitialState::Site(0), InitialState::Site(center), InitialState::Uniform] {
        curves.push(sweep_p(&spec, initial, &grid, &[0], &ctx.options())?);
    }
    let rows: Vec<_> = curves
        .iter()
        .map(|c| (vec![site_label(c.provenance.initial)], c))
        .collect();
    out.csv("curves.csv", &curve_means(&["initial_site"], &rows)?)?;
    let mut opt = Table::new(["initial_site", "p_opt", "e_max", "grid_p", "flat", "t_bar"]);
    for c in &curves {
        let o = find_p_opt(c)?;
        opt.push(vec![
            site_label(c.provenance.initial),
            f(o.p_opt),
            f(o.e_max),
            f(c.points[o.grid_index].x),
            o.flat.to_string(),
            f(c.provenance.t_bar),
        ])?;
    }
    out.csv("optimum.csv", &opt)?;
    out.manifest.set("topology", spec);
    let series = curves
        .iter()
        .map(|c| line(format!("initial {}", site_label(c.provenance.initial)), c))
        .collect();
    out.svg("curves.svg", &e_of_p(&format!("{t}, sink at node {}", t.n_nodes()), series))
}

fn fig1(ctx: &Context, out: &mut Output) -> Result<()> {
    initial_conditions(ctx, out, Topology::Chain { n: 35 }, 17)?;
    let s = scaling_study(&SCALING_SIZES, &SCALING_P, TIME_PER_NODE, InitialState::Site(0), &ctx.options())?;
    let mut t = Table::new(["n", "p", "t_bar", "efficiency"]);
    for r in &s.rows {
        t.push(vec![r.n.to_string(), f(r.p), f(r.t_bar), f(r.efficiency)])?;
    }
    out.csv("scaling.csv", &t)?;
    let mut fits = Table::new(["p", "exponent", "prefactor", "r_squared"]);
    for (p, fit) in &s.fits {
        fits.push_floats(&[*p, fit.exponent, fit.prefactor, fit.r_squared])?;
    }
    out.csv("scaling_fit.csv", &fits)?;
    let series = SCALING_P
        .iter()
        .map(|&p| {
            let pts = s.rows.iter().filter(|r| r.p == p).map(|r| (r.n as f64, r.efficiency)).collect();
            Series::line(format!("p = {p}"), pts)
        })
        .collect();
    out.svg(
        "scaling.svg",
        &plot("E(p, 5N) against N", Axis::log("N"), Axis::log("E"), series),
    )
}

fn fig5(ctx: &Context, out: &mut Output) -> Result<()> {
    let cli = &ctx.run.cli;
    let seeds = derive_seeds(cli.seed, cli.seeds);
    let curves = small_world_sweep(
        LATTICE_SIDE,
        LATTICE_SIDE,
        &SMALL_WORLD_R,
        &uniform_grid(cli.p_grid),
        &seeds,
        InitialState::Site(0),
        &ctx.options(),
    )?;
    let rows: Vec<_> = curves.iter().map(|c| (vec![f(c.r)], &c.curve)).collect();
    out.csv("curves.csv", &curve_means(&["r"], &rows)?)?;
    out.csv("per_seed.csv", &curve_per_seed(&["r"], &rows)?)?;
    let mut t = Table::new(["r", "p_opt", "e_max", "flatness", "e_quantum", "e_classical"]);
    for c in &curves {
        let m = c.curve.means();
        t.push_floats(&[c.r, c.optimum.p_opt, c.optimum.e_max, c.flatness, m[0], m[m.len() - 1]])?;
    }
    out.csv("summary.csv", &t)?;
    let series = curves.iter().map(|c| line(format!("r = {}", c.r), &c.curve)).collect();
    out.svg("curves.svg", &e_of_p("small worlds from a 14x14 lattice", series))
}

fn fig6(ctx: &Context, out: &mut Output) -> Result<()> {
    let cli = &ctx.run.cli;
    let seeds = derive_seeds(cli.seed, cli.seeds);
    let e = effective_rewiring(LATTICE_SIDE, LATTICE_SIDE, &EFFECTIVE_P, &seeds, InitialState::Site(0), &ctx.options())?;
    let mut t = Table::new(["p", "target_efficiency", "status", "r_e", "matched_efficiency"]);
    let opt = |x: Option<f64>| x.map_or(String::new(), f);
    for m in &e.matches {
        t.push(vec![f(m.p), f(m.target), m.status.label().into(), opt(m.r_e), opt(m.matched_efficiency)])?;
    }
    out.csv("matches.csv", &t)?;
    let mut c = Table::new(["r", "classical_efficiency"]);
    for &(r, eff) in &e.classical {
        c.push_floats(&[r, eff])?;
    }
    out.csv("classical.csv", &c)?;
    out.manifest.set("t_bar", f(e.t_bar));
    out.manifest.set("classical_monotone", e.monotone);
    match (&e.fit, &e.fit_error) {
        (Some(fit), _) => {
            out.manifest.set("exponent", f(fit.exponent));
            out.manifest.set("prefactor", f(fit.prefactor));
            out.manifest.set("r_squared", f(fit.r_squared));
        }
        (None, Some(err)) => out.manifest.set("fit_error", err),
        _ => {}
    }
    out.svg(
        "efficiency.svg",
        &plot(
            "lattice QSW against small-world CRW",
            Axis::linear("p (QSW) or r (CRW)"),
            Axis::linear("E(t_bar)"),
            vec![
                line("lattice QSW, E(p)", &e.lattice),
                Series::line("small-world CRW, E(r)", e.classical.clone()),
            ],
        ),
    )?;
    let matched: Vec<(f64, f64)> = e
        .matches
        .iter()
        .filter(|m| m.status == MatchStatus::Matched)
        .filter_map(|m| m.r_e.filter(|&r| r > 0.0).map(|r| (m.p, r)))
        .collect();
    if !matched.is_empty() {
        out.svg(
            "r_e.svg",
            &plot("effective rewiring", Axis::log("p"), Axis::log("r_e"), vec![Series::scatter("matched", matched)]),
        )?;
    }
    Ok(())
}

fn fig7(ctx: &Context, out: &mut Output) -> Result<()> {
    let cli = &ctx.run.cli;
    let (p, r) = PAIR;
    let g = generate_graph(&TopologySpec::new(lattice(), 0))?;
    let n = g.n_nodes();
    let cfg = QswConfig {
        p,
        gamma: cli.gamma,
        sink: n - 1,
        convention: cli.convention(),
    };
    let initial = InitialState::Site(0);
    let t_final = match cli.t_final {
        Some(t) => t,
        None => select_tbar(&g, &cfg, initial, &cli.sweep_settings())?.t_bar,
    };
    let settings = qsw_core::dynamics::EvolveSettings {
        record_populations: false,
        ..cli.trajectory_settings()
    };
    let quantum = evolve_qsw(&g, &cfg, initial, t_final, &settings)?;
    let seeds = derive_seeds(cli.seed, cli.seeds);
    let mut classical = vec![0.0; quantum.times.len()];
    for &seed in &seeds {
        let sw = generate_graph(&TopologySpec::new(
            Topology::SmallWorld {
                rows: LATTICE_SIDE,
                cols: LATTICE_SIDE,
                rewiring: r,
            },
            seed,
        ))?;
        let traj = evolve_qsw(&sw, &cfg.with_p(1.0), initial, t_final, &settings)?;
        for (acc, e) in classical.iter_mut().zip(&traj.efficiency) {
            *acc += e;
        }
    }
    classical.iter_mut().for_each(|e| *e /= seeds.len() as f64);
    let mut t = Table::new(["time", "lattice_qsw", "small_world_crw"]);
    for (k, &time) in quantum.times.iter().enumerate() {
        t.push_floats(&[time, quantum.efficiency[k], classical[k]])?;
    }
    out.csv("trajectories.csv", &t)?;
    out.manifest.set("t_final", f(t_final));
    out.manifest.set("realizations", seeds.len());
    let series = vec![
        Series::line(format!("lattice QSW, p = {p}"), quantum.times.iter().copied().zip(quantum.efficiency.iter().copied()).collect()),
        Series::line(format!("small-world CRW, r = {r}"), quantum.times.iter().copied().zip(classical.iter().copied()).collect()),
    ];
    out.svg("trajectories.svg", &plot("E(t)", Axis::linear("t"), Axis::linear("E"), series))
}

fn robustness(ctx: &Context, out: &mut Output, mode: PerturbMode) -> Result<()> {
    let cli = &ctx.run.cli;
    let seeds = derive_seeds(cli.seed, cli.seeds);
    let study: RobustnessStudy = robustness_curve(
        &TopologySpec::new(lattice(), 0),
        mode,
        &LINK_COUNTS,
        &uniform_grid(cli.p_grid),
        &seeds,
        InitialState::Uniform,
        &ctx.options(),
    )?;
    let rows: Vec<_> = study.curves.iter().map(|c| (vec![c.count.to_string()], &c.curve)).collect();
    out.csv("curves.csv", &curve_means(&["links_changed"], &rows)?)?;
    out.csv("per_seed.csv", &curve_per_seed(&["links_changed"], &rows)?)?;
    let mut t = Table::new(["links_changed", "p_opt", "e_max", "flat"]);
    for c in &study.curves {
        t.push(vec![c.count.to_string(), f(c.optimum.p_opt), f(c.optimum.e_max), c.optimum.flat.to_string()])?;
    }
    out.csv("summary.csv", &t)?;
    out.manifest.set("mode", mode);
    out.manifest.set("p_opt_min", f(study.p_opt_range.0));
    out.manifest.set("p_opt_max", f(study.p_opt_range.1));
    let series = study
        .curves
        .iter()
        .map(|c| line(format!("{mode} {} links", c.count), &c.curve))
        .collect();
    out.svg("curves.svg", &e_of_p(&format!("14x14 lattice, links {mode}d"), series))
}

fn fig12(ctx: &Context, out: &mut Output) -> Result<()> {
    let cli = &ctx.run.cli;
    let seeds = derive_seeds(cli.seed, cli.seeds);
    let grid = uniform_grid(cli.p_grid);
    let mut curves = Vec::new();
    for t in [Topology::RandomRegular { rows: 10, cols: 20 }, Topology::ScaleFree { n: 187, links: 2 }] {
        curves.push(sweep_p(&TopologySpec::new(t, 0), InitialState::Site(0), &grid, &seeds, &ctx.options())?);
    }
    let rows: Vec<_> = curves
        .iter()
        .map(|c| (vec![c.provenance.topology.topology.family().to_string()], c))
        .collect();
    out.csv("curves.csv", &curve_means(&["family"], &rows)?)?;
    out.csv("per_seed.csv", &curve_per_seed(&["family"], &rows)?)?;
    let mut t = Table::new(["family", "p_opt", "e_max", "flat"]);
    for c in &curves {
        let o = find_p_opt(c)?;
        t.push(vec![
            c.provenance.topology.topology.family().into(),
            f(o.p_opt),
            f(o.e_max),
            o.flat.to_string(),
        ])?;
    }
    out.csv("summary.csv", &t)?;
    let series = curves
        .iter()
        .map(|c| line(c.provenance.topology.topology.to_string(), c))
        .collect();
    out.svg("curves.svg", &e_of_p("random regular and scale-free networks", series))
}

fn fig13(ctx: &Context, out: &mut Output) -> Result<()> {
    let cli = &ctx.run.cli;
    let seeds = derive_seeds(cli.seed, cli.seeds);
    let specs: Vec<_> = comparable_families().into_iter().map(|t| TopologySpec::new(t, 0)).collect();
    let scan = diameter_efficiency_scan(&specs, &seeds, TIME_PER_NODE, &ctx.options())?;
    let mut t = Table::new(["family", "topology", "seed", "n", "diameter", "initial_site", "sink", "t_bar", "efficiency"]);
    for r in &scan.rows {
        t.push(vec![
            r.family.into(),
            r.topology.clone(),
            r.seed.to_string(),
            r.n.to_string(),
            r.diameter.to_string(),
            (r.initial + 1).to_string(),
            (r.sink + 1).to_string(),
            f(r.t_bar),
            f(r.efficiency),
        ])?;
    }
    out.csv("scan.csv", &t)?;
    out.manifest.set("pearson", scan.pearson.map_or("undefined".into(), f));
    let mut families: Vec<&str> = scan.rows.iter().map(|r| r.family).collect();
    families.dedup();
    let series = families
        .iter()
        .map(|fam| {
            let pts = scan
                .rows
                .iter()
                .filter(|r| r.family == *fam)
                .map(|r| (r.efficiency, r.diameter as f64))
                .collect();
            Series::scatter(*fam, pts)
        })
        .collect();
    out.svg(
        "scan.svg",
        &plot("diameter against classical efficiency", Axis::linear("E(p = 1)"), Axis::linear("D"), series),
    )?;

    // Inset: the complete graph is best served classically.
    let fc = sweep_p(
        &TopologySpec::new(Topology::Complete { n: 100 }, 0),
        InitialState::Site(0),
        &uniform_grid(cli.p_grid),
        &[0],
        &ctx.options(),
    )?;
    let rows = [(vec![], &fc)];
    out.csv("complete.csv", &curve_means(&[], &rows)?)?;
    out.manifest.set("complete_p_opt", f(find_p_opt(&fc)?.p_opt));
    out.svg("complete.svg", &e_of_p("complete graph, N = 100", vec![line("", &fc)]))
}
