//! Parameter sweeps and the derived studies: optimal dephasing, size
//! scaling, small-world mapping, robustness and the diameter scan.

mod curve;
mod fit;
mod pool;
mod studies;

pub use curve::{
    find_p_opt, locate_optimum, sweep_p, Abscissa, CurvePoint, EfficiencyCurve, Optimum,
    Provenance, FLAT_TOLERANCE,
};
pub use fit::{fit_power_law, pearson, PowerLawFit};
pub use pool::run_tasks;
pub use studies::{
    diameter_efficiency_scan, effective_rewiring, robustness_curve, scaling_study,
    small_world_sweep, DiameterRow, DiameterScan, EffectiveRewiring, MatchStatus,
    RewiringMatch, RobustnessCurve, RobustnessStudy, ScalingRow, ScalingStudy, SmallWorldCurve,
    BISECTION_ITERATIONS, MATCH_TOLERANCE,
};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{AmplitudeConvention, EvolveSettings, QswConfig};
use crate::graph::Topology;

/// Default number of random realizations per stochastic point.
pub const DEFAULT_SEEDS: usize = 20;

/// Default `p` grid: 21 points `0, 0.05, ..., 1`.
pub fn default_p_grid() -> Vec<f64> {
    uniform_grid(21)
}

/// Ten families of comparable size (N between 187 and 255) for the
/// diameter scan: from the chain (largest diameter) down to the complete
/// graph.
pub fn comparable_families() -> Vec<Topology> {
    vec![
        Topology::Chain { n: 200 },
        Topology::Ring { n: 200 },
        Topology::KaryTree { arity: 2, depth: 7 },
        Topology::Dendrimer { branching: 3, generations: 6 },
        Topology::square(14),
        Topology::SmallWorld { rows: 14, cols: 14, rewiring: 0.1 },
        Topology::RandomRegular { rows: 10, cols: 20 },
        Topology::ScaleFree { n: 200, links: 2 },
        Topology::Star { n: 200 },
        Topology::Complete { n: 200 },
    ]
}

/// `points` equally spaced values covering `[0, 1]`.
pub fn uniform_grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points).map(|k| k as f64 / (points - 1) as f64).collect(),
    }
}

/// Seed of task `index` under `master`. Counter based, so any task can be
/// re-run on its own.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.next_u64()
}

/// The first `count` task seeds under `master`.
pub fn derive_seeds(master: u64, count: usize) -> Vec<u64> {
    (0..count as u64).map(|k| derive_seed(master, k)).collect()
}

/// Physics and execution settings shared by every task of an experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub gamma: f64,
    pub convention: AmplitudeConvention,
    pub settings: EvolveSettings,
    /// Fixed evaluation time; `None` lets each sweep pick its own.
    pub t_bar: Option<f64>,
    /// Worker threads; results never depend on it.
    pub threads: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            convention: AmplitudeConvention::SqrtRate,
            settings: EvolveSettings::fast(),
            t_bar: None,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

impl RunOptions {
    pub fn with_t_bar(self, t_bar: f64) -> Self {
        Self {
            t_bar: Some(t_bar),
            ..self
        }
    }

    pub fn with_threads(self, threads: usize) -> Self {
        Self { threads, ..self }
    }

    pub(crate) fn config(&self, p: f64, sink: usize) -> QswConfig {
        QswConfig {
            p,
            gamma: self.gamma,
            sink,
            convention: self.convention,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_stable_and_distinct() {
        let a = derive_seeds(7, 5);
        assert_eq!(a, derive_seeds(7, 5));
        assert_eq!(a[3], derive_seed(7, 3));
        let mut sorted = a.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 5);
        assert_ne!(derive_seed(8, 0), a[0]);
    }

    #[test]
    fn default_grid() {
        let g = default_p_grid();
        assert_eq!(g.len(), 21);
        assert_eq!(g[2], 0.1);
        assert_eq!(g[20], 1.0);
    }
}
