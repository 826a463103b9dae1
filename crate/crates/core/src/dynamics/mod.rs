//! Classical and quantum stochastic walk dynamics with a sink.

mod config;
mod crw;
mod evolve;
mod generator;
mod invariant;
mod limits;
mod propagate;
mod state;

pub use config::{AmplitudeConvention, InitialState, QswConfig};
pub use crw::{crw_evolve, crw_stationary, CrwTrajectory};
pub use evolve::{
    evolve_at, evolve_qsw, select_tbar, transfer_efficiency, EvolveSettings, TbarSelection,
    Trajectory, DRIFT_LIMIT, TBAR_DOUBLINGS, TBAR_FACTOR, TBAR_PROBE, TBAR_THRESHOLD,
};
pub use generator::{qsw_derivative, Generator, StateDerivative};
pub use invariant::{invariant_subspace, InvariantSubspace};
pub use limits::{ClassicalSink, CoherentSink};
pub use propagate::{default_rk4_step, Integrator, Propagator};
pub use state::DensityState;
