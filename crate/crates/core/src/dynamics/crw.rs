//! The classical continuous-time random walk, `dq/dt = (T - 1) q`.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::graph::{Graph, TransitionMatrix};

/// Population vectors sampled at every integration step.
#[derive(Clone, Debug, PartialEq)]
pub struct CrwTrajectory {
    pub times: Vec<f64>,
    pub populations: Vec<Vec<f64>>,
}

impl CrwTrajectory {
    pub fn last(&self) -> &[f64] {
        self.populations.last().map(Vec::as_slice).unwrap_or(&[])
    }
}

fn check_distribution(q0: &[f64], n: usize) -> Result<()> {
    if q0.len() != n {
        return Err(Error::Structural(format!(
            "initial distribution has {} entries for {n} nodes",
            q0.len()
        )));
    }
    if q0.iter().any(|&q| !(q >= 0.0)) {
        return Err(Error::param("q0", "entries must be non-negative"));
    }
    let total: f64 = q0.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::param("q0", format!("entries sum to {total}, not 1")));
    }
    Ok(())
}

/// RK4 integration of the classical walk with step `dt`; the last step is
/// shortened to land on `t_final`.
pub fn crw_evolve(
    t_mat: &TransitionMatrix,
    q0: &[f64],
    t_final: f64,
    dt: f64,
) -> Result<CrwTrajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param("dt", format!("step must be positive, got {dt}")));
    }
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::param(
            "t_final",
            format!("final time must be non-negative, got {t_final}"),
        ));
    }
    let n = t_mat.n_nodes();
    check_distribution(q0, n)?;
    let t = t_mat.matrix();
    let rhs = |q: &DVector<f64>| t * q - q;

    let mut q = DVector::from_column_slice(q0);
    let mut traj = CrwTrajectory {
        times: vec![0.0],
        populations: vec![q0.to_vec()],
    };
    let steps = ((t_final / dt) * (1.0 - 1e-12)).ceil() as usize;
    let mut time = 0.0;
    for k in 0..steps {
        let h = if k + 1 == steps { t_final - time } else { dt };
        let k1 = rhs(&q);
        let k2 = rhs(&(&q + &k1 * (0.5 * h)));
        let k3 = rhs(&(&q + &k2 * (0.5 * h)));
        let k4 = rhs(&(&q + &k3 * h));
        q += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        time = if k + 1 == steps { t_final } else { time + h };
        traj.times.push(time);
        traj.populations.push(q.as_slice().to_vec());
    }
    Ok(traj)
}

/// Stationary distribution `d_i / sum_j d_j`.
pub fn crw_stationary(g: &Graph) -> Result<Vec<f64>> {
    g.ensure_connected()?;
    let total = 2.0 * g.n_edges() as f64;
    Ok(g.degrees().into_iter().map(|d| d as f64 / total).collect())
}
