use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::InitialState;
use crate::error::{Error, Result};

/// Density matrix of the network plus the population already trapped in
/// the sink.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityState {
    pub rho: DMatrix<Complex64>,
    /// Accumulated sink population, the transfer efficiency so far.
    pub sunk: f64,
    pub time: f64,
}

impl DensityState {
    pub fn localized(n: usize, site: usize) -> Result<Self> {
        if site >= n {
            return Err(Error::param(
                "initial_site",
                format!("site {site} is not a node of a {n}-node graph"),
            ));
        }
        let mut rho = DMatrix::zeros(n, n);
        rho[(site, site)] = Complex64::new(1.0, 0.0);
        Ok(Self {
            rho,
            sunk: 0.0,
            time: 0.0,
        })
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            rho: DMatrix::from_diagonal_element(n, n, Complex64::new(1.0 / n as f64, 0.0)),
            sunk: 0.0,
            time: 0.0,
        }
    }

    pub fn initial(n: usize, initial: InitialState) -> Result<Self> {
        match initial {
            InitialState::Site(s) => Self::localized(n, s),
            InitialState::Uniform => Ok(Self::maximally_mixed(n)),
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.rho.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.rho.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.rho.diagonal().iter().map(|z| z.re).collect()
    }

    /// `trace(rho) + sunk`, one for an exact evolution.
    pub fn total_population(&self) -> f64 {
        self.trace() + self.sunk
    }

    pub fn purity(&self) -> f64 {
        self.rho.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest entry of `|rho - rho^dagger|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.n_nodes();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.rho[(i, j)] - self.rho[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the Hermitian part of `rho`.
    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.rho + self.rho.adjoint()) * Complex64::new(0.5, 0.0);
        SymmetricEigen::new(h)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Real packed form `[Re rho (row-major), Im rho (row-major), sunk]`.
    pub fn pack(&self) -> Vec<f64> {
        let n = self.n_nodes();
        let mut v = vec![0.0; 2 * n * n + 1];
        let (re, rest) = v.split_at_mut(n * n);
        for i in 0..n {
            for j in 0..n {
                let z = self.rho[(i, j)];
                re[i * n + j] = z.re;
                rest[i * n + j] = z.im;
            }
        }
        v[2 * n * n] = self.sunk;
        v
    }

    pub fn unpack(n: usize, v: &[f64], time: f64) -> Self {
        let n2 = n * n;
        debug_assert_eq!(v.len(), 2 * n2 + 1);
        let rho = DMatrix::from_fn(n, n, |i, j| Complex64::new(v[i * n + j], v[n2 + i * n + j]));
        Self {
            rho,
            sunk: v[2 * n2],
            time,
        }
    }
}
