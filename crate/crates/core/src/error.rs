use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its allowed domain.
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// A stochastic generator could not produce a valid connected graph.
    #[error("graph construction failed after {retries} retries: {reason}")]
    Construction { retries: usize, reason: String },

    /// Input violates a structural precondition (disconnected graph, dimension mismatch, ...).
    #[error("structural error: {0}")]
    Structural(String),

    /// Link perturbation stopped early because connectivity could not be kept.
    #[error("perturbation stopped after {achieved} of {requested} links: {reason}")]
    Perturbation {
        achieved: usize,
        requested: usize,
        reason: String,
    },

    /// Trace plus sink population drifted away from one.
    #[error("integrator failure at t = {time}: conservation drift {drift:.3e} exceeds {limit:.1e}; retry with a smaller step")]
    Integrator { time: f64, drift: f64, limit: f64 },

    #[error("fit error: {0}")]
    Fit(String),

    #[error("plot error: {0}")]
    Plot(String),

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    /// An experiment task failed; carries the failing sweep coordinates.
    /// `p` is absent when the failure happened while building the graph.
    #[error("task ({}) failed: {source}", task_label(*.p, *.seed))]
    Task {
        p: Option<f64>,
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

fn task_label(p: Option<f64>, seed: u64) -> String {
    match p {
        Some(p) => format!("p = {p}, seed = {seed}"),
        None => format!("seed = {seed}"),
    }
}

impl Error {
    pub fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn in_task(self, p: Option<f64>, seed: u64) -> Self {
        Error::Task {
            p,
            seed,
            source: Box::new(self),
        }
    }

    /// Innermost error, looking through [`Error::Task`] annotations.
    pub fn root(&self) -> &Error {
        match self {
            Error::Task { source, .. } => source.root(),
            other => other,
        }
    }
}
