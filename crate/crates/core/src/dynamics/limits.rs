//! Closed-form solutions of the two limits of the walk.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::config::{AmplitudeConvention, QswConfig};
use super::state::DensityState;
use crate::error::{Error, Result};
use crate::graph::{symmetric_spectrum, Graph};

/// Exact populations of the `p = 1` walk with a sink, from one symmetric
/// eigendecomposition.
///
/// The rate matrix `G = R - diag(w) - 2 gamma e_s e_s^T` is similar to a
/// symmetric one through `diag(d^(k/2))` (`k = 1` for sqrt_rate jump
/// amplitudes, `k = 2` for literal ones).
#[derive(Clone, Debug)]
pub struct ClassicalSink {
    scale: Vec<f64>,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

impl ClassicalSink {
    pub fn new(g: &Graph, cfg: &QswConfig) -> Result<Self> {
        g.ensure_connected()?;
        cfg.validate(g.n_nodes())?;
        let n = g.n_nodes();
        let k = match cfg.convention {
            AmplitudeConvention::SqrtRate => 1,
            AmplitudeConvention::Literal => 2,
        };
        let d: Vec<f64> = g.degrees().into_iter().map(|d| d as f64).collect();
        let mut s = DMatrix::zeros(n, n);
        for &(i, j) in g.edges() {
            let v = (d[i] * d[j]).powf(-0.5 * k as f64);
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
        for i in 0..n {
            s[(i, i)] = -d[i].powi(1 - k);
        }
        s[(cfg.sink, cfg.sink)] -= 2.0 * cfg.gamma;
        let (eigenvalues, eigenvectors) = symmetric_spectrum(s);
        Ok(Self {
            scale: d.iter().map(|x| x.powf(0.5 * k as f64)).collect(),
            eigenvalues,
            eigenvectors,
        })
    }

    /// Node populations at time `t` from `q0`; the sink holds `1 - sum`.
    pub fn populations(&self, q0: &[f64], t: f64) -> Vec<f64> {
        let v = &self.eigenvectors;
        let n = self.scale.len();
        // q(t) = S V exp(L t) V^T S^-1 q0
        let y: Vec<f64> = (0..n).map(|i| q0[i] / self.scale[i]).collect();
        let mut c = v.tr_mul(&DVector::from_vec(y));
        for (ck, &l) in c.iter_mut().zip(&self.eigenvalues) {
            *ck *= (l * t).exp();
        }
        let q = v * c;
        q.iter().zip(&self.scale).map(|(x, s)| x * s).collect()
    }

    /// Sink population at `t`.
    pub fn efficiency(&self, q0: &[f64], t: f64) -> f64 {
        1.0 - self.populations(q0, t).iter().sum::<f64>()
    }
}

/// The `p = 0` walk with a sink: `rho(t) = U rho U^dagger` with
/// `U = exp(-(i A + gamma |s><s|) t)`.
#[derive(Clone, Debug)]
pub struct CoherentSink {
    generator: DMatrix<Complex64>,
}

impl CoherentSink {
    pub fn new(g: &Graph, cfg: &QswConfig) -> Result<Self> {
        g.ensure_connected()?;
        cfg.validate(g.n_nodes())?;
        if cfg.p != 0.0 {
            return Err(Error::param("p", "the coherent solution needs p = 0"));
        }
        let mut generator = g.adjacency_matrix().map(|a| Complex64::new(0.0, -a));
        generator[(cfg.sink, cfg.sink)] -= Complex64::new(cfg.gamma, 0.0);
        Ok(Self { generator })
    }

    /// `U(t)`.
    pub fn propagator(&self, t: f64) -> DMatrix<Complex64> {
        (&self.generator * Complex64::new(t, 0.0)).exp()
    }

    /// Advances `state` by `u = propagator(dt)`; the lost trace goes to the sink.
    pub fn apply(&self, u: &DMatrix<Complex64>, state: &DensityState, dt: f64) -> DensityState {
        let rho = u * &state.rho * u.adjoint();
        let mut next = DensityState {
            rho,
            sunk: state.sunk,
            time: state.time + dt,
        };
        next.sunk += state.trace() - next.trace();
        next
    }
}
