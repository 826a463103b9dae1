use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::config::{InitialState, QswConfig};
use super::limits::{ClassicalSink, CoherentSink};
use super::generator::Generator;
use super::propagate::{Integrator, Propagator};
use super::state::DensityState;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Conservation drift that aborts a run.
pub const DRIFT_LIMIT: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq)]
pub struct EvolveSettings {
    pub integrator: Integrator,
    /// Number of equally spaced samples after `t = 0`.
    pub samples: usize,
    pub record_populations: bool,
    /// Use the closed-form solutions at `p = 0` (unitary propagator with a
    /// leaky sink) and `p = 1` (classical rate equation) instead of
    /// propagating the full density matrix.
    pub exact_limits: bool,
}

impl Default for EvolveSettings {
    fn default() -> Self {
        Self {
            integrator: Integrator::default(),
            samples: 100,
            record_populations: false,
            exact_limits: false,
        }
    }
}

impl EvolveSettings {
    /// Chebyshev propagation plus the closed-form limits; what the
    /// experiments use.
    pub fn fast() -> Self {
        Self {
            integrator: Integrator::chebyshev(),
            samples: 1,
            record_populations: false,
            exact_limits: true,
        }
    }

    pub fn with_samples(self, samples: usize) -> Self {
        Self { samples, ..self }
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    /// Sample times, starting at 0.
    pub times: Vec<f64>,
    /// `E(p, t)` at each sample.
    pub efficiency: Vec<f64>,
    /// `rho_ii(t)` per sample, when requested.
    pub populations: Option<Vec<Vec<f64>>>,
    pub config: QswConfig,
    pub initial: InitialState,
    pub integrator: Integrator,
    /// Largest `|trace + sunk - 1|` seen at the samples.
    pub max_drift: f64,
    pub final_state: DensityState,
}

impl Trajectory {
    pub fn final_efficiency(&self) -> f64 {
        self.efficiency.last().copied().unwrap_or(0.0)
    }
}

/// Integrates the walk from `initial` up to `t_final`.
pub fn evolve_qsw(
    g: &Graph,
    cfg: &QswConfig,
    initial: InitialState,
    t_final: f64,
    settings: &EvolveSettings,
) -> Result<Trajectory> {
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::param(
            "t_final",
            format!("final time must be non-negative, got {t_final}"),
        ));
    }
    let samples = settings.samples.max(1);
    let times: Vec<f64> = (0..=samples)
        .map(|k| t_final * k as f64 / samples as f64)
        .collect();
    evolve_at(g, cfg, initial, &times, settings)
}

/// Like [`evolve_qsw`] but sampled at the given increasing times.
pub fn evolve_at(
    g: &Graph,
    cfg: &QswConfig,
    initial: InitialState,
    times: &[f64],
    settings: &EvolveSettings,
) -> Result<Trajectory> {
    if times.windows(2).any(|w| !(w[1] >= w[0])) || times.first().is_some_and(|&t| t < 0.0) {
        return Err(Error::param("times", "sample times must be increasing and non-negative"));
    }
    let n = g.n_nodes();
    let state0 = DensityState::initial(n, initial)?;
    if settings.exact_limits && cfg.p == 1.0 {
        return evolve_classical(g, cfg, initial, times, state0, settings);
    }
    if settings.exact_limits && cfg.p == 0.0 {
        return evolve_coherent(g, cfg, initial, times, state0, settings);
    }
    let gen = Generator::new(g, cfg)?;
    let mut prop = Propagator::new(&gen, settings.integrator);
    let mut x = state0.pack();
    let mut traj = Trajectory {
        times: times.to_vec(),
        efficiency: Vec::with_capacity(times.len()),
        populations: settings.record_populations.then(Vec::new),
        config: *cfg,
        initial,
        integrator: settings.integrator,
        max_drift: 0.0,
        final_state: state0,
    };
    let mut now = 0.0;
    for &t in times {
        prop.advance(&mut x, t - now);
        now = t;
        let trace: f64 = (0..n).map(|i| x[i * n + i]).sum();
        let sunk = x[2 * n * n];
        let drift = (trace + sunk - 1.0).abs();
        if !(drift <= DRIFT_LIMIT) {
            return Err(Error::Integrator {
                time: t,
                drift,
                limit: DRIFT_LIMIT,
            });
        }
        traj.max_drift = traj.max_drift.max(drift);
        traj.efficiency.push(sunk);
        if let Some(pops) = traj.populations.as_mut() {
            pops.push((0..n).map(|i| x[i * n + i]).collect());
        }
    }
    traj.final_state = DensityState::unpack(n, &x, now);
    Ok(traj)
}

fn evolve_coherent(
    g: &Graph,
    cfg: &QswConfig,
    initial: InitialState,
    times: &[f64],
    state0: DensityState,
    settings: &EvolveSettings,
) -> Result<Trajectory> {
    let exact = CoherentSink::new(g, cfg)?;
    let mut traj = Trajectory {
        times: times.to_vec(),
        efficiency: Vec::with_capacity(times.len()),
        populations: settings.record_populations.then(Vec::new),
        config: *cfg,
        initial,
        integrator: settings.integrator,
        max_drift: 0.0,
        final_state: state0,
    };
    let mut cached: Option<(f64, DMatrix<Complex64>)> = None;
    for &t in times {
        let dt = t - traj.final_state.time;
        if dt > 0.0 {
            let u = match cached.take() {
                Some((h, u)) if (h - dt).abs() <= 1e-12 * dt => u,
                _ => exact.propagator(dt),
            };
            traj.final_state = exact.apply(&u, &traj.final_state, dt);
            cached = Some((dt, u));
        }
        traj.efficiency.push(traj.final_state.sunk);
        if let Some(pops) = traj.populations.as_mut() {
            pops.push(traj.final_state.populations());
        }
    }
    Ok(traj)
}

fn evolve_classical(
    g: &Graph,
    cfg: &QswConfig,
    initial: InitialState,
    times: &[f64],
    state0: DensityState,
    settings: &EvolveSettings,
) -> Result<Trajectory> {
    let exact = ClassicalSink::new(g, cfg)?;
    let q0 = state0.populations();
    let mut efficiency = Vec::with_capacity(times.len());
    let mut pops = Vec::with_capacity(times.len());
    for &t in times {
        let q = exact.populations(&q0, t);
        efficiency.push(1.0 - q.iter().sum::<f64>());
        pops.push(q);
    }
    let n = g.n_nodes();
    let last = pops.last().cloned().unwrap_or(q0);
    let mut final_state = DensityState::initial(n, initial)?;
    final_state.rho = DMatrix::from_diagonal(&DVector::from_iterator(
        n,
        last.iter().map(|&q| Complex64::new(q, 0.0)),
    ));
    final_state.sunk = efficiency.last().copied().unwrap_or(0.0);
    final_state.time = times.last().copied().unwrap_or(0.0);
    Ok(Trajectory {
        times: times.to_vec(),
        efficiency,
        populations: settings.record_populations.then_some(pops),
        config: *cfg,
        initial,
        integrator: settings.integrator,
        max_drift: 0.0,
        final_state,
    })
}

/// `E(p, t_bar)`.
pub fn transfer_efficiency(
    g: &Graph,
    cfg: &QswConfig,
    initial: InitialState,
    t_bar: f64,
    settings: &EvolveSettings,
) -> Result<f64> {
    if !(t_bar >= 0.0) {
        return Err(Error::param("t_bar", format!("must be non-negative, got {t_bar}")));
    }
    Ok(evolve_at(g, cfg, initial, &[t_bar], settings)?.final_efficiency())
}

/// Evaluation horizon chosen by [`select_tbar`].
#[derive(Clone, Debug, PartialEq)]
pub struct TbarSelection {
    pub t_bar: f64,
    /// The cap was reached without any probe reaching the threshold.
    pub saturated: bool,
    /// Best probe efficiency at `t_bar`.
    pub best_efficiency: f64,
}

/// Probe values of `p` used to decide when transport has completed.
pub const TBAR_PROBE: [f64; 4] = [0.0, 0.1, 0.5, 1.0];
pub const TBAR_FACTOR: f64 = 5.0;
pub const TBAR_DOUBLINGS: u32 = 6;
pub const TBAR_THRESHOLD: f64 = 0.99;

/// Smallest `t = 5 N 2^k`, `k = 0..=6`, at which some probe `p` transfers at
/// least 99% of the excitation. `base` supplies gamma, sink and convention.
pub fn select_tbar(
    g: &Graph,
    base: &QswConfig,
    initial: InitialState,
    settings: &EvolveSettings,
) -> Result<TbarSelection> {
    let n = g.n_nodes();
    let schedule: Vec<f64> = (0..=TBAR_DOUBLINGS)
        .map(|k| TBAR_FACTOR * n as f64 * 2f64.powi(k as i32))
        .collect();
    // Probes in the order cheapest-first; each keeps its own state so the
    // doubling schedule costs no more than the last horizon.
    let mut probes = Vec::new();
    for &p in TBAR_PROBE.iter().rev() {
        let cfg = base.with_p(p);
        probes.push(Probe::new(g, &cfg, initial, settings)?);
    }
    let mut best = 0.0;
    for &t in &schedule {
        best = 0.0f64;
        for probe in probes.iter_mut() {
            let e = probe.efficiency_at(t)?;
            best = best.max(e);
            if best >= TBAR_THRESHOLD {
                return Ok(TbarSelection {
                    t_bar: t,
                    saturated: false,
                    best_efficiency: best,
                });
            }
        }
    }
    Ok(TbarSelection {
        t_bar: *schedule.last().unwrap_or(&0.0),
        saturated: true,
        best_efficiency: best,
    })
}

enum Probe {
    Exact {
        solver: ClassicalSink,
        q0: Vec<f64>,
    },
    Coherent {
        solver: CoherentSink,
        state: DensityState,
    },
    Propagated {
        gen: Box<Generator>,
        integrator: Integrator,
        x: Vec<f64>,
        now: f64,
    },
}

impl Probe {
    fn new(
        g: &Graph,
        cfg: &QswConfig,
        initial: InitialState,
        settings: &EvolveSettings,
    ) -> Result<Self> {
        let state = DensityState::initial(g.n_nodes(), initial)?;
        if settings.exact_limits && cfg.p == 1.0 {
            return Ok(Probe::Exact {
                solver: ClassicalSink::new(g, cfg)?,
                q0: state.populations(),
            });
        }
        if settings.exact_limits && cfg.p == 0.0 {
            return Ok(Probe::Coherent {
                solver: CoherentSink::new(g, cfg)?,
                state,
            });
        }
        Ok(Probe::Propagated {
            gen: Box::new(Generator::new(g, cfg)?),
            integrator: settings.integrator,
            x: state.pack(),
            now: 0.0,
        })
    }

    fn efficiency_at(&mut self, t: f64) -> Result<f64> {
        match self {
            Probe::Exact { solver, q0 } => Ok(solver.efficiency(q0, t)),
            Probe::Coherent { solver, state } => {
                let dt = t - state.time;
                *state = solver.apply(&solver.propagator(dt), state, dt);
                Ok(state.sunk)
            }
            Probe::Propagated {
                gen,
                integrator,
                x,
                now,
            } => {
                let mut prop = Propagator::new(gen, *integrator);
                prop.advance(x, t - *now);
                *now = t;
                let n = gen.n_nodes();
                let trace: f64 = (0..n).map(|i| x[i * n + i]).sum();
                let sunk = x[2 * n * n];
                let drift = (trace + sunk - 1.0).abs();
                if !(drift <= DRIFT_LIMIT) {
                    return Err(Error::Integrator {
                        time: t,
                        drift,
                        limit: DRIFT_LIMIT,
                    });
                }
                Ok(sunk)
            }
        }
    }
}
