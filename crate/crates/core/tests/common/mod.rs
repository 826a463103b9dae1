//! Brute-force references shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;
use qsw_core::dynamics::{AmplitudeConvention, DensityState, QswConfig};
use qsw_core::graph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Right-hand side written term by term as a sum over explicit jump
/// operators `L_ij = amp(T_ij) |i><j|`, with nothing folded in.
pub fn lindblad_rhs(g: &Graph, cfg: &QswConfig, rho: &DMatrix<C>) -> (DMatrix<C>, f64) {
    let n = g.n_nodes();
    let a = g.adjacency_matrix().map(|x| C::new(x, 0.0));
    let i = C::new(0.0, 1.0);
    let mut d = (&a * rho - rho * &a) * (-i * (1.0 - cfg.p));
    for col in 0..n {
        for &row in g.neighbors(col) {
            let t = 1.0 / g.degree(col) as f64;
            let amp = match cfg.convention {
                AmplitudeConvention::SqrtRate => t.sqrt(),
                AmplitudeConvention::Literal => t,
            };
            let mut l = DMatrix::zeros(n, n);
            l[(row, col)] = C::new(amp, 0.0);
            let ld = l.adjoint();
            let ll = &ld * &l;
            d += (&l * rho * &ld - (&ll * rho + rho * &ll) * C::new(0.5, 0.0)) * C::new(cfg.p, 0.0);
        }
    }
    let mut proj = DMatrix::zeros(n, n);
    proj[(cfg.sink, cfg.sink)] = C::new(1.0, 0.0);
    d -= (&proj * rho + rho * &proj) * C::new(cfg.gamma, 0.0);
    (d, 2.0 * cfg.gamma * rho[(cfg.sink, cfg.sink)].re)
}

/// Dense superoperator on `[vec(rho) row-major, sunk]`.
pub fn liouvillian(g: &Graph, cfg: &QswConfig) -> DMatrix<C> {
    let n = g.n_nodes();
    let dim = n * n + 1;
    let mut m = DMatrix::zeros(dim, dim);
    for k in 0..n {
        for l in 0..n {
            let mut basis = DMatrix::zeros(n, n);
            basis[(k, l)] = C::new(1.0, 0.0);
            let (d, ds) = lindblad_rhs(g, cfg, &basis);
            let col = k * n + l;
            for r in 0..n {
                for c in 0..n {
                    m[(r * n + c, col)] = d[(r, c)];
                }
            }
            m[(n * n, col)] = C::new(ds, 0.0);
        }
    }
    m
}

/// Exact state at time `t` by exponentiating the superoperator.
pub fn exact_state(g: &Graph, cfg: &QswConfig, start: &DensityState, t: f64) -> DensityState {
    let n = g.n_nodes();
    let mut v = DVector::zeros(n * n + 1);
    for r in 0..n {
        for c in 0..n {
            v[r * n + c] = start.rho[(r, c)];
        }
    }
    v[n * n] = C::new(start.sunk, 0.0);
    let w = (liouvillian(g, cfg) * C::new(t, 0.0)).exp() * v;
    DensityState {
        rho: DMatrix::from_fn(n, n, |r, c| w[r * n + c]),
        sunk: w[n * n].re,
        time: start.time + t,
    }
}

/// Populations of the `p = 1` walk from an augmented `N + 1` state rate
/// matrix whose last state is the sink.
pub fn classical_with_sink(g: &Graph, cfg: &QswConfig, q0: &[f64], t: f64) -> Vec<f64> {
    let n = g.n_nodes();
    let mut m = DMatrix::<f64>::zeros(n + 1, n + 1);
    for j in 0..n {
        for &i in g.neighbors(j) {
            let r = match cfg.convention {
                AmplitudeConvention::SqrtRate => 1.0 / g.degree(j) as f64,
                AmplitudeConvention::Literal => (g.degree(j) as f64).powi(-2),
            };
            m[(i, j)] += r;
            m[(j, j)] -= r;
        }
    }
    m[(cfg.sink, cfg.sink)] -= 2.0 * cfg.gamma;
    m[(n, cfg.sink)] += 2.0 * cfg.gamma;
    let mut v = DVector::zeros(n + 1);
    v.rows_mut(0, n).copy_from_slice(q0);
    ((m * t).exp() * v).iter().copied().collect()
}

/// Random connected graph: a random spanning tree plus extra edges.
pub fn random_connected(n: usize, extra: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.random::<f64>() < extra && !edges.contains(&(a, b)) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Random density matrix of trace `1 - sunk`.
pub fn random_state(n: usize, sunk: f64, seed: u64) -> DensityState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = DMatrix::from_fn(n, n, |_, _| {
        C::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let mut rho = &b * b.adjoint();
    let tr: f64 = rho.diagonal().iter().map(|z| z.re).sum();
    rho *= C::new((1.0 - sunk) / tr, 0.0);
    DensityState {
        rho,
        sunk,
        time: 0.0,
    }
}

pub fn max_diff(a: &DMatrix<C>, b: &DMatrix<C>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
