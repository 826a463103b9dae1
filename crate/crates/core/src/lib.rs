//! Quantum stochastic walks on complex networks.
//!
//! A single excitation hops over an undirected graph under a Lindblad
//! master equation that mixes coherent evolution (Hamiltonian = adjacency
//! matrix) with classical random-walk jumps through a weight `p`. One node
//! leaks irreversibly into a sink; the population collected there by a
//! time `t` is the transfer efficiency.
//!
//! * [`graph`]: network families, rewiring/deletion perturbations, metrics.
//! * [`dynamics`]: classical walk, the open-system generator, propagators,
//!   efficiency and invariant subspaces.
//! * [`experiments`]: p-sweeps, optimum search, scaling fits and the
//!   topology studies built on them.
//! * [`io`]: CSV, SVG and manifest output.

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod io;

pub use error::{Error, Result};
