use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::curve::{build_graphs, check_grid, mean, realization_seeds, sink_and_start, sweep_built};
use super::{find_p_opt, fit_power_law, pearson, run_tasks, EfficiencyCurve, Optimum, PowerLawFit, RunOptions};
use crate::dynamics::{select_tbar, transfer_efficiency, ClassicalSink, InitialState};
use crate::error::{Error, Result};
use crate::graph::{
    check_probability, generate_graph, perturb_links, rewire_small_world, Graph, PerturbMode,
    Topology, TopologySpec,
};

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub p: f64,
    pub t_bar: f64,
    pub efficiency: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingStudy {
    pub c: f64,
    pub initial: InitialState,
    /// Ordered by `n`, then by `p` in the order given.
    pub rows: Vec<ScalingRow>,
    /// Power law of `E` against `N`, one per `p`.
    pub fits: Vec<(f64, PowerLawFit)>,
}

/// Chains of each size evaluated at `t_bar = c * N`.
pub fn scaling_study(
    sizes: &[usize],
    p_list: &[f64],
    c: f64,
    initial: InitialState,
    opts: &RunOptions,
) -> Result<ScalingStudy> {
    if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("sizes", "must be a non-empty increasing list"));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::param("c", format!("must be positive, got {c}")));
    }
    check_grid(p_list)?;
    let graphs = sizes
        .iter()
        .map(|&n| generate_graph(&TopologySpec::new(Topology::Chain { n }, 0)))
        .collect::<Result<Vec<_>>>()?;
    let tasks: Vec<(usize, f64)> = (0..sizes.len())
        .flat_map(|k| p_list.iter().map(move |&p| (k, p)))
        .collect();
    let rows = run_tasks(&tasks, opts.threads, |&(k, p)| {
        let g = &graphs[k];
        let cfg = opts.config(p, sink_and_start(g, initial)?);
        let t_bar = c * sizes[k] as f64;
        let efficiency = transfer_efficiency(g, &cfg, initial, t_bar, &opts.settings)
            .map_err(|e| e.in_task(Some(p), 0))?;
        Ok(ScalingRow {
            n: sizes[k],
            p,
            t_bar,
            efficiency,
        })
    })?;
    let fits = p_list
        .iter()
        .map(|&p| {
            let pts: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.p == p)
                .map(|r| (r.n as f64, r.efficiency))
                .collect();
            Ok((p, fit_power_law(&pts)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScalingStudy {
        c,
        initial,
        rows,
        fits,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmallWorldCurve {
    pub r: f64,
    pub curve: EfficiencyCurve,
    pub optimum: Optimum,
    /// `max - min` of the mean efficiency over `p`.
    pub flatness: f64,
}

/// One sweep over `p` per rewiring probability. All curves share the
/// `t_bar` of the unrewired lattice so they can be compared point by point.
pub fn small_world_sweep(
    rows: usize,
    cols: usize,
    r_list: &[f64],
    p_grid: &[f64],
    seeds: &[u64],
    initial: InitialState,
    opts: &RunOptions,
) -> Result<Vec<SmallWorldCurve>> {
    check_grid(p_grid)?;
    r_list.iter().try_for_each(|&r| check_probability("r", r))?;
    let opts = with_shared_t_bar(&TopologySpec::new(Topology::SquareLattice { rows, cols }, 0), initial, opts)?;
    r_list
        .iter()
        .map(|&r| {
            let spec = TopologySpec::new(Topology::SmallWorld { rows, cols, rewiring: r }, 0);
            let seeds = realization_seeds(&spec, seeds)?;
            let graphs = build_graphs(&seeds, opts.threads, |seed| generate_graph(&spec.with_seed(seed)))?;
            let curve = sweep_built(spec, None, &graphs, &seeds, initial, p_grid, &opts)?;
            let optimum = find_p_opt(&curve)?;
            Ok(SmallWorldCurve {
                r,
                flatness: curve.flatness(),
                optimum,
                curve,
            })
        })
        .collect()
}

/// Options with `t_bar` fixed, selecting it on `spec` if not already set.
fn with_shared_t_bar(spec: &TopologySpec, initial: InitialState, opts: &RunOptions) -> Result<RunOptions> {
    if opts.t_bar.is_some() {
        return Ok(opts.clone());
    }
    let g = generate_graph(spec)?;
    let sink = sink_and_start(&g, initial)?;
    let sel = select_tbar(&g, &opts.config(0.0, sink), initial, &opts.settings)?;
    Ok(opts.clone().with_t_bar(sel.t_bar))
}

/// Largest `|E_CRW(r_e) - target|` accepted as a match.
pub const MATCH_TOLERANCE: f64 = 1e-3;
pub const BISECTION_ITERATIONS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchStatus {
    Matched,
    /// The classical walk on the unrewired lattice already does better.
    BelowLattice,
    /// Not even `r = 1` reaches the target.
    Unreachable,
    /// The seed-averaged curve jumps across the target by more than the
    /// tolerance.
    Unresolved,
}

impl MatchStatus {
    pub fn label(self) -> &'static str {
        match self {
            MatchStatus::Matched => "matched",
            MatchStatus::BelowLattice => "below_lattice",
            MatchStatus::Unreachable => "unreachable",
            MatchStatus::Unresolved => "unresolved",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RewiringMatch {
    pub p: f64,
    /// Quantum walk efficiency on the lattice.
    pub target: f64,
    pub status: MatchStatus,
    /// Best rewiring found; `None` when no `r` in `[0, 1]` brackets the target.
    pub r_e: Option<f64>,
    /// Classical efficiency at `r_e`.
    pub matched_efficiency: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveRewiring {
    pub t_bar: f64,
    pub seeds: Vec<u64>,
    /// Quantum walk on the lattice, the targets.
    pub lattice: EfficiencyCurve,
    /// Classical walk on small worlds, `(r, mean E)` on a fixed grid.
    pub classical: Vec<(f64, f64)>,
    /// Whether `classical` is non-decreasing in `r`.
    pub monotone: bool,
    pub matches: Vec<RewiringMatch>,
    /// Power law of `r_e` against `p` over the matched pairs with `r_e > 0`.
    pub fit: Option<PowerLawFit>,
    pub fit_error: Option<String>,
}

/// Rewiring grid on which the classical curve is tabulated.
const CLASSICAL_R_GRID: [f64; 12] = [0.0, 0.005, 0.01, 0.02, 0.05, 0.075, 0.1, 0.15, 0.2, 0.3, 0.5, 1.0];

/// For each `p`, the rewiring at which the classical walk on a small world
/// delivers what the `p`-walk delivers on the plain lattice.
pub fn effective_rewiring(
    rows: usize,
    cols: usize,
    p_values: &[f64],
    seeds: &[u64],
    initial: InitialState,
    opts: &RunOptions,
) -> Result<EffectiveRewiring> {
    check_grid(p_values)?;
    if seeds.is_empty() {
        return Err(Error::param("seeds", "needs at least one seed"));
    }
    let lattice_spec = TopologySpec::new(Topology::SquareLattice { rows, cols }, 0);
    let opts = with_shared_t_bar(&lattice_spec, initial, opts)?;
    let t_bar = opts.t_bar.unwrap_or_default();
    let lattice_graph = generate_graph(&lattice_spec)?;
    let lattice = sweep_built(lattice_spec, None, std::slice::from_ref(&lattice_graph), &[0], initial, p_values, &opts)?;

    let n = lattice_graph.n_nodes();
    let sink = sink_and_start(&lattice_graph, initial)?;
    let q0 = match initial {
        InitialState::Site(s) => (0..n).map(|i| if i == s { 1.0 } else { 0.0 }).collect(),
        InitialState::Uniform => vec![1.0 / n as f64; n],
    };
    let classical_cfg = opts.config(1.0, sink);
    let crw = |r: f64| -> Result<f64> {
        let values = run_tasks(seeds, opts.threads, |&seed| {
            let g = rewire_small_world(&lattice_graph, r, seed).map_err(|e| e.in_task(Some(1.0), seed))?;
            Ok(ClassicalSink::new(&g, &classical_cfg)?.efficiency(&q0, t_bar))
        })?;
        Ok(mean(&values))
    };

    let classical = CLASSICAL_R_GRID
        .iter()
        .map(|&r| Ok((r, crw(r)?)))
        .collect::<Result<Vec<_>>>()?;
    let monotone = classical.windows(2).all(|w| w[1].1 >= w[0].1);
    let (e_lo, e_hi) = (classical[0].1, classical[classical.len() - 1].1);

    let mut matches = Vec::new();
    for point in &lattice.points {
        let target = point.mean;
        let m = if target > e_hi + MATCH_TOLERANCE {
            RewiringMatch {
                p: point.x,
                target,
                status: MatchStatus::Unreachable,
                r_e: None,
                matched_efficiency: None,
            }
        } else if target < e_lo - MATCH_TOLERANCE {
            RewiringMatch {
                p: point.x,
                target,
                status: MatchStatus::BelowLattice,
                r_e: None,
                matched_efficiency: None,
            }
        } else {
            let (r, e) = bisect(&crw, target, (0.0, e_lo), (1.0, e_hi))?;
            RewiringMatch {
                p: point.x,
                target,
                status: if (e - target).abs() < MATCH_TOLERANCE {
                    MatchStatus::Matched
                } else {
                    MatchStatus::Unresolved
                },
                r_e: Some(r),
                matched_efficiency: Some(e),
            }
        };
        matches.push(m);
    }

    let pts: Vec<(f64, f64)> = matches
        .iter()
        .filter(|m| m.status == MatchStatus::Matched)
        .filter_map(|m| m.r_e.filter(|&r| r > 0.0).map(|r| (m.p, r)))
        .collect();
    let (fit, fit_error) = match fit_power_law(&pts) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(EffectiveRewiring {
        t_bar,
        seeds: seeds.to_vec(),
        lattice,
        classical,
        monotone,
        matches,
        fit,
        fit_error,
    })
}

/// Bisection for `f(r) = target` assuming `f` increases, run for the full
/// iteration budget so `r` lands on the crossing. Returns the evaluated
/// point closest to the target.
fn bisect(
    f: &impl Fn(f64) -> Result<f64>,
    target: f64,
    mut lo: (f64, f64),
    mut hi: (f64, f64),
) -> Result<(f64, f64)> {
    let mut best = if (lo.1 - target).abs() <= (hi.1 - target).abs() { lo } else { hi };
    for _ in 0..BISECTION_ITERATIONS {
        let r = 0.5 * (lo.0 + hi.0);
        let e = f(r)?;
        if (e - target).abs() < (best.1 - target).abs() {
            best = (r, e);
        }
        if e < target {
            lo = (r, e);
        } else {
            hi = (r, e);
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RobustnessCurve {
    pub count: usize,
    pub curve: EfficiencyCurve,
    pub optimum: Optimum,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RobustnessStudy {
    pub mode: PerturbMode,
    pub curves: Vec<RobustnessCurve>,
    /// Smallest and largest `p_opt` over the counts.
    pub p_opt_range: (f64, f64),
}

/// Sweeps over `p` after rewiring or deleting `count` random links, for each
/// count. Every curve uses the `t_bar` of the unperturbed graph.
pub fn robustness_curve(
    spec: &TopologySpec,
    mode: PerturbMode,
    counts: &[usize],
    p_grid: &[f64],
    seeds: &[u64],
    initial: InitialState,
    opts: &RunOptions,
) -> Result<RobustnessStudy> {
    check_grid(p_grid)?;
    if counts.is_empty() {
        return Err(Error::param("counts", "needs at least one count"));
    }
    if seeds.is_empty() {
        return Err(Error::param("seeds", "needs at least one seed"));
    }
    let opts = with_shared_t_bar(&spec.with_seed(realization_seeds(spec, seeds)?[0]), initial, opts)?;
    let mut curves = Vec::new();
    for &count in counts {
        // Without perturbation a deterministic family has one realization.
        let seeds: Vec<u64> = if count == 0 && !spec.topology.is_stochastic() {
            vec![seeds[0]]
        } else {
            seeds.to_vec()
        };
        let graphs = build_graphs(&seeds, opts.threads, |seed| {
            let base = generate_graph(&base_spec(spec, seed))?;
            perturb_links(&base, mode, count, seed)
        })?;
        let curve = sweep_built(*spec, Some((mode, count)), &graphs, &seeds, initial, p_grid, &opts)?;
        let optimum = find_p_opt(&curve)?;
        curves.push(RobustnessCurve {
            count,
            curve,
            optimum,
        });
    }
    let lo = curves.iter().map(|c| c.optimum.p_opt).fold(f64::INFINITY, f64::min);
    let hi = curves.iter().map(|c| c.optimum.p_opt).fold(f64::NEG_INFINITY, f64::max);
    Ok(RobustnessStudy {
        mode,
        curves,
        p_opt_range: (lo, hi),
    })
}

fn base_spec(spec: &TopologySpec, seed: u64) -> TopologySpec {
    if spec.topology.is_stochastic() {
        spec.with_seed(seed)
    } else {
        *spec
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiameterRow {
    pub family: &'static str,
    pub topology: String,
    pub seed: u64,
    pub n: usize,
    pub diameter: usize,
    pub initial: usize,
    pub sink: usize,
    pub t_bar: f64,
    /// Classical (`p = 1`) efficiency at `t_bar`.
    pub efficiency: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiameterScan {
    pub rows: Vec<DiameterRow>,
    /// Correlation of diameter with efficiency over all rows.
    pub pearson: Option<f64>,
}

/// Classical efficiency between a random pair of distinct sites, at
/// `t_bar = c * N`, against the graph diameter. One row per spec and seed.
pub fn diameter_efficiency_scan(
    specs: &[TopologySpec],
    seeds: &[u64],
    c: f64,
    opts: &RunOptions,
) -> Result<DiameterScan> {
    if specs.is_empty() || seeds.is_empty() {
        return Err(Error::param("specs", "needs at least one topology and one seed"));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::param("c", format!("must be positive, got {c}")));
    }
    let tasks: Vec<(usize, u64)> = (0..specs.len())
        .flat_map(|k| seeds.iter().map(move |&s| (k, s)))
        .collect();
    let rows = run_tasks(&tasks, opts.threads, |&(k, seed)| {
        let spec = base_spec(&specs[k], seed);
        let g = generate_graph(&spec).map_err(|e| e.in_task(None, seed))?;
        let n = g.n_nodes();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64 + 1);
        let sink = rng.random_range(0..n);
        let mut initial = rng.random_range(0..n - 1);
        if initial >= sink {
            initial += 1;
        }
        let t_bar = c * n as f64;
        let cfg = opts.config(1.0, sink);
        let efficiency = transfer_efficiency(&g, &cfg, InitialState::Site(initial), t_bar, &opts.settings)
            .map_err(|e| e.in_task(Some(1.0), seed))?;
        Ok(DiameterRow {
            family: spec.topology.family(),
            topology: spec.to_string(),
            seed,
            n,
            diameter: diameter(&g)?,
            initial,
            sink,
            t_bar,
            efficiency,
        })
    })?;
    let d: Vec<f64> = rows.iter().map(|r| r.diameter as f64).collect();
    let e: Vec<f64> = rows.iter().map(|r| r.efficiency).collect();
    Ok(DiameterScan {
        pearson: pearson(&d, &e),
        rows,
    })
}

fn diameter(g: &Graph) -> Result<usize> {
    g.ensure_connected()?;
    Ok((0..g.n_nodes())
        .flat_map(|s| g.bfs_distances(s))
        .map(|d| d.unwrap_or(0))
        .max()
        .unwrap_or(0))
}
