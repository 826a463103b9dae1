//! The walk generator acting on packed real states.
//!
//! `rho = X + iY` with `X` symmetric and `Y` antisymmetric is stored as
//! `[X (row-major), Y (row-major), sunk]`. With `H = A`,
//!
//! ```text
//! dX   =  (1-p) (AY - YA) + p diag(R q) - (g_i + g_j) X_ij
//! dY   = -(1-p) (AX - XA)                - (g_i + g_j) Y_ij
//! dsunk = 2 gamma X_ss
//! ```
//!
//! where `q = diag X`, `R_ij` is the `j -> i` jump rate, `w_j = sum_i R_ij`
//! and `g_i = p w_i / 2 + gamma [i = s]`. Since `YA = -(AY)^T` and
//! `XA = (AX)^T`, only the products `AX` and `AY` are formed.

use super::config::{AmplitudeConvention, QswConfig};
use crate::error::{Error, Result};
use crate::graph::{symmetric_spectrum, Graph, TransitionMatrix};

/// Rows per transposition tile.
const TILE: usize = 8;

/// Sparse neighbour lists in compressed form.
#[derive(Clone, Debug)]
struct Csr {
    start: Vec<usize>,
    index: Vec<usize>,
}

impl Csr {
    fn from_lists(lists: impl Iterator<Item = Vec<usize>>) -> Self {
        let mut start = vec![0];
        let mut index = Vec::new();
        for l in lists {
            index.extend(l);
            start.push(index.len());
        }
        Self { start, index }
    }

    #[inline]
    fn row(&self, i: usize) -> &[usize] {
        &self.index[self.start[i]..self.start[i + 1]]
    }
}

#[derive(Clone, Debug)]
pub struct Generator {
    n: usize,
    coherent: f64,
    p: f64,
    gamma: f64,
    sink: usize,
    /// Adjacency lists, or complement lists when `complement` is set
    /// (then `A = J - I - complement`).
    hops: Csr,
    complement: bool,
    /// Incoming jumps per node: `(j, R_ij)`.
    jumps_in: Vec<Vec<(usize, f64)>>,
    damping: Vec<f64>,
    spectral_range: (f64, f64),
}

impl Generator {
    pub fn new(g: &Graph, cfg: &QswConfig) -> Result<Self> {
        g.ensure_connected()?;
        cfg.validate(g.n_nodes())?;
        let n = g.n_nodes();
        let exponent = match cfg.convention {
            AmplitudeConvention::SqrtRate => 1,
            AmplitudeConvention::Literal => 2,
        };
        let rate = |j: usize| (g.degree(j) as f64).powi(-exponent);
        let jumps_in: Vec<Vec<(usize, f64)>> = (0..n)
            .map(|i| g.neighbors(i).iter().map(|&j| (j, rate(j))).collect())
            .collect();
        let mut outflow = vec![0.0; n];
        for list in &jumps_in {
            for &(j, r) in list {
                outflow[j] += r;
            }
        }
        let damping = (0..n)
            .map(|i| {
                0.5 * cfg.p * outflow[i] + if i == cfg.sink { cfg.gamma } else { 0.0 }
            })
            .collect();

        let complement = 2 * g.n_edges() > n * (n - 1) / 2 + n;
        let hops = if complement {
            Csr::from_lists((0..n).map(|i| {
                (0..n)
                    .filter(|&j| j != i && !g.has_edge(i, j))
                    .collect()
            }))
        } else {
            Csr::from_lists((0..n).map(|i| g.neighbors(i).to_vec()))
        };

        let (eigenvalues, _) = symmetric_spectrum(g.adjacency_matrix());
        let spectral_range = (eigenvalues[n - 1], eigenvalues[0]);

        Ok(Self {
            n,
            coherent: 1.0 - cfg.p,
            p: cfg.p,
            gamma: cfg.gamma,
            sink: cfg.sink,
            hops,
            complement,
            jumps_in,
            damping,
            spectral_range,
        })
    }

    /// Generator for the graph encoded by the non-zero pattern of `t`.
    pub fn from_transition(t: &TransitionMatrix, cfg: &QswConfig) -> Result<Self> {
        Self::new(&t.graph(), cfg)
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    /// Length of a packed state.
    pub fn dim(&self) -> usize {
        2 * self.n * self.n + 1
    }

    /// Work buffer for [`Generator::apply`].
    pub fn scratch(&self) -> Vec<f64> {
        vec![0.0; 2 * self.n * self.n + 2 * TILE * self.n + 2 * self.n]
    }

    /// Smallest and largest adjacency eigenvalue.
    pub fn spectral_range(&self) -> (f64, f64) {
        self.spectral_range
    }

    /// Semi-axes `(imaginary, real)` and real centre of an ellipse around
    /// the numerical range of the generator.
    pub(crate) fn spectral_box(&self) -> (f64, f64, f64) {
        let (lo, hi) = self.spectral_range;
        let g_max = self.damping.iter().copied().fold(0.0, f64::max);
        let w_max = self
            .jumps_in
            .iter()
            .map(|l| l.iter().map(|&(_, r)| r).sum::<f64>())
            .fold(0.0, f64::max);
        let imag = self.coherent * (hi - lo) + self.p * w_max;
        let real = g_max + 0.5 * self.p * w_max;
        // The ellipse must hold the whole rectangle, corners included: far
        // from normal generators (dense graphs at small p) put pseudospectrum
        // there. Doubling the real axis costs a factor 2/sqrt(3) on the other.
        (imag * 2.0 / 3f64.sqrt(), 2.0 * real, -real)
    }

    /// Rough upper bound on the largest eigenvalue magnitude, for step sizes.
    pub fn norm_estimate(&self) -> f64 {
        let (lo, hi) = self.spectral_range;
        hi.abs().max(lo.abs()).max(self.gamma)
    }

    /// `out = L(x)`; `buf` comes from [`Generator::scratch`].
    pub fn apply(&self, x: &[f64], out: &mut [f64], buf: &mut [f64]) {
        self.apply_affine(x, out, buf, Affine::plain());
    }

    /// `out = alpha L(x) + beta x + gamma extra`, then `acc += delta out`,
    /// in one pass over the state. Returns `max |delta out|` when an
    /// accumulator is given.
    pub(crate) fn apply_affine(
        &self,
        x: &[f64],
        out: &mut [f64],
        buf: &mut [f64],
        op: Affine<'_>,
    ) -> f64 {
        let n = self.n;
        let n2 = n * n;
        debug_assert_eq!(x.len(), 2 * n2 + 1);
        debug_assert_eq!(out.len(), 2 * n2 + 1);
        let Affine {
            alpha,
            beta,
            extra,
            mut acc,
        } = op;
        let (xs, rest) = x.split_at(n2);
        let ys = &rest[..n2];
        let (ax, rest) = buf.split_at_mut(n2);
        let (ay, rest) = rest.split_at_mut(n2);
        let (tx, rest) = rest.split_at_mut(TILE * n);
        let (ty, colsum) = rest.split_at_mut(TILE * n);
        if self.complement {
            colsum.fill(0.0);
            let (cx, cy) = colsum.split_at_mut(n);
            for (rx, ry) in xs.chunks_exact(n).zip(ys.chunks_exact(n)) {
                add_assign(cx, rx);
                add_assign(cy, ry);
            }
        }
        for i in 0..n {
            let row = i * n..(i + 1) * n;
            self.left_rows(xs, ys, i, &mut ax[row.clone()], &mut ay[row], colsum);
        }

        // With X symmetric and Y antisymmetric, XA = (AX)^T and YA = -(AY)^T:
        // dX = c (AY + (AY)^T), dY = -c (AX - (AX)^T). Transposed rows are
        // read through small tiles so every access stays contiguous.
        let c = self.coherent;
        let damping = &self.damping[..];
        let mut worst = 0.0f64;
        for i0 in (0..n).step_by(TILE) {
            let rows = TILE.min(n - i0);
            for j in 0..n {
                let (sx, sy) = (&ax[j * n + i0..j * n + i0 + rows], &ay[j * n + i0..j * n + i0 + rows]);
                for r in 0..rows {
                    tx[r * n + j] = sx[r];
                    ty[r * n + j] = sy[r];
                }
            }
            for r in 0..rows {
                let i = i0 + r;
                let row = i * n..(i + 1) * n;
                let gi = damping[i];
                let (axt, ayt) = (&tx[r * n..(r + 1) * n], &ty[r * n..(r + 1) * n]);

                let ox = &mut out[row.clone()];
                for ((((o, &a), &b), &g), &v) in ox.iter_mut().zip(&ay[row.clone()]).zip(ayt).zip(damping).zip(&xs[row.clone()]) {
                    *o = c * (a + b) - (gi + g) * v;
                }
                let gain: f64 = self.jumps_in[i]
                    .iter()
                    .map(|&(j, rate)| rate * xs[j * n + j])
                    .sum();
                ox[i] += self.p * gain;
                worst = worst.max(finish_row(ox, i * n, x, alpha, beta, extra, acc.as_mut()));

                let oy = &mut out[n2 + i * n..n2 + (i + 1) * n];
                for ((((o, &a), &b), &g), &v) in oy.iter_mut().zip(&ax[row.clone()]).zip(axt).zip(damping).zip(&ys[row]) {
                    *o = -c * (a - b) - (gi + g) * v;
                }
                worst = worst.max(finish_row(oy, n2 + i * n, x, alpha, beta, extra, acc.as_mut()));
            }
        }
        let s = 2 * n2;
        let mut ds = 2.0 * self.gamma * xs[self.sink * n + self.sink];
        ds = alpha * ds + beta * x[s];
        if let Some((e, gamma)) = extra {
            ds += gamma * e[s];
        }
        out[s] = ds;
        if let Some((a, delta)) = acc {
            a[s] += delta * ds;
            worst = worst.max((delta * ds).abs());
        }
        worst
    }

    /// Row `i` of `A X` and `A Y`.
    #[inline]
    fn left_rows(
        &self,
        xs: &[f64],
        ys: &[f64],
        i: usize,
        ax: &mut [f64],
        ay: &mut [f64],
        colsum: &[f64],
    ) {
        let n = self.n;
        if self.complement {
            // A = J - I - C
            let (cx, cy) = colsum.split_at(n);
            let (xi, yi) = (&xs[i * n..(i + 1) * n], &ys[i * n..(i + 1) * n]);
            for ((a, &s), &v) in ax.iter_mut().zip(cx).zip(xi) {
                *a = s - v;
            }
            for ((a, &s), &v) in ay.iter_mut().zip(cy).zip(yi) {
                *a = s - v;
            }
            for &k in self.hops.row(i) {
                sub_assign(ax, &xs[k * n..(k + 1) * n]);
                sub_assign(ay, &ys[k * n..(k + 1) * n]);
            }
        } else {
            ax.fill(0.0);
            ay.fill(0.0);
            for &k in self.hops.row(i) {
                add_assign(ax, &xs[k * n..(k + 1) * n]);
                add_assign(ay, &ys[k * n..(k + 1) * n]);
            }
        }
    }
}

#[inline(always)]
fn add_assign(a: &mut [f64], b: &[f64]) {
    for (a, &b) in a.iter_mut().zip(b) {
        *a += b;
    }
}

#[inline(always)]
fn sub_assign(a: &mut [f64], b: &[f64]) {
    for (a, &b) in a.iter_mut().zip(b) {
        *a -= b;
    }
}

#[inline(always)]
fn finish_row(
    o: &mut [f64],
    offset: usize,
    x: &[f64],
    alpha: f64,
    beta: f64,
    extra: Option<(&[f64], f64)>,
    acc: Option<&mut (&mut [f64], f64)>,
) -> f64 {
    let len = o.len();
    let base = &x[offset..offset + len];
    match extra {
        Some((e, gamma)) => {
            for ((o, &b), &e) in o.iter_mut().zip(base).zip(&e[offset..offset + len]) {
                *o = alpha * *o + beta * b + gamma * e;
            }
        }
        None => {
            for (o, &b) in o.iter_mut().zip(base) {
                *o = alpha * *o + beta * b;
            }
        }
    }
    let mut worst = 0.0f64;
    if let Some((a, delta)) = acc {
        for (a, &o) in a[offset..offset + len].iter_mut().zip(o.iter()) {
            let t = *delta * o;
            *a += t;
            worst = worst.max(t.abs());
        }
    }
    worst
}

/// Coefficients for [`Generator::apply_affine`].
pub(crate) struct Affine<'a> {
    pub alpha: f64,
    pub beta: f64,
    pub extra: Option<(&'a [f64], f64)>,
    pub acc: Option<(&'a mut [f64], f64)>,
}

impl Affine<'_> {
    pub fn plain() -> Self {
        Self {
            alpha: 1.0,
            beta: 0.0,
            extra: None,
            acc: None,
        }
    }
}

/// Time derivative of a state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateDerivative {
    pub drho: nalgebra::DMatrix<num_complex::Complex64>,
    pub dsunk: f64,
}

/// Right-hand side of the master equation with sink at `state`.
pub fn qsw_derivative(
    state: &super::DensityState,
    cfg: &QswConfig,
    t_mat: &TransitionMatrix,
) -> Result<StateDerivative> {
    if state.n_nodes() != t_mat.n_nodes() {
        return Err(Error::Structural(format!(
            "state has {} nodes, transition matrix {}",
            state.n_nodes(),
            t_mat.n_nodes()
        )));
    }
    let gen = Generator::from_transition(t_mat, cfg)?;
    let x = state.pack();
    let mut out = vec![0.0; gen.dim()];
    let mut buf = gen.scratch();
    gen.apply(&x, &mut out, &mut buf);
    let d = super::DensityState::unpack(gen.n_nodes(), &out, state.time);
    Ok(StateDerivative {
        drho: d.rho,
        dsunk: d.sunk,
    })
}
