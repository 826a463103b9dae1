use std::fmt;

use crate::error::{Error, Result};
use crate::graph::check_probability;

/// How the jump operators scale with the hopping matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AmplitudeConvention {
    /// `L_ij = sqrt(T_ij) |i><j|`: jump rates equal `T_ij`, so the `p = 1`
    /// populations follow the classical walk exactly.
    #[default]
    SqrtRate,
    /// `L_ij = T_ij |i><j|`: jump rates `T_ij^2`.
    Literal,
}

impl fmt::Display for AmplitudeConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AmplitudeConvention::SqrtRate => "sqrt_rate",
            AmplitudeConvention::Literal => "literal",
        })
    }
}

/// Parameters of the walk. The Hamiltonian is always the adjacency matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QswConfig {
    /// Weight of the incoherent part; `0` is a pure quantum walk, `1` the
    /// classical random walk.
    pub p: f64,
    /// Sink rate; the sink collects `2 * gamma * rho_ss` per unit time.
    pub gamma: f64,
    pub sink: usize,
    pub convention: AmplitudeConvention,
}

impl QswConfig {
    pub fn new(p: f64, sink: usize) -> Self {
        Self {
            p,
            gamma: 1.0,
            sink,
            convention: AmplitudeConvention::SqrtRate,
        }
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        Self { gamma, ..self }
    }

    pub fn with_p(self, p: f64) -> Self {
        Self { p, ..self }
    }

    pub fn validate(&self, n_nodes: usize) -> Result<()> {
        check_probability("p", self.p)?;
        // gamma = 0 is the closed walk without a sink.
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::param(
                "gamma",
                format!("sink rate must be non-negative, got {}", self.gamma),
            ));
        }
        if self.sink >= n_nodes {
            return Err(Error::param(
                "sink",
                format!("sink {} is not a node of a {n_nodes}-node graph", self.sink),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for QswConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p={} gamma={} sink={} convention={}",
            self.p, self.gamma, self.sink, self.convention
        )
    }
}

/// Starting state of the excitation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialState {
    /// Fully localized on one node.
    Site(usize),
    /// `1/N` identity. By linearity its efficiency equals the mean of the
    /// efficiencies of all localized starts.
    Uniform,
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialState::Site(s) => write!(f, "site({s})"),
            InitialState::Uniform => f.write_str("average_all"),
        }
    }
}
