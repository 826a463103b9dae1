use nalgebra::{DMatrix, SymmetricEigen};

use super::Graph;
use crate::error::{Error, Result};

/// Topological and spectral observables of a connected graph.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphMetrics {
    /// Hop counts, `shortest_paths[(i, j)]`.
    pub shortest_paths: DMatrix<usize>,
    /// Mean shortest path over the `N(N-1)/2` node pairs.
    pub char_path_length: f64,
    pub diameter: usize,
    /// Mean local clustering; nodes of degree 0 or 1 contribute 0.
    pub clustering: f64,
    pub degrees: Vec<usize>,
    /// Adjacency eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// `|lambda_(1)| - |lambda_(2)|` with eigenvalues ranked by magnitude.
    pub spectral_gap: f64,
    /// Number of distinct adjacency eigenvalues.
    pub distinct_eigenvalues: usize,
}

/// Eigen-decomposition of a real symmetric matrix, eigenpairs sorted by
/// descending eigenvalue.
pub fn symmetric_spectrum(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, c| eig.eigenvectors[(i, order[c])]);
    (values, vectors)
}

/// Groups descending eigenvalues into clusters of (numerically) equal
/// values. Neighbours closer than `1e-8 * max(1, |lambda_max|)` share a
/// cluster. Returns index ranges into `sorted`.
pub fn cluster_eigenvalues(sorted: &[f64]) -> Vec<std::ops::Range<usize>> {
    let scale = sorted
        .iter()
        .fold(1.0f64, |m, &x| m.max(x.abs()));
    let tol = 1e-8 * scale;
    let mut clusters = Vec::new();
    let mut start = 0;
    for k in 1..=sorted.len() {
        if k == sorted.len() || (sorted[k - 1] - sorted[k]).abs() > tol {
            clusters.push(start..k);
            start = k;
        }
    }
    clusters
}

pub fn compute_metrics(g: &Graph) -> Result<GraphMetrics> {
    g.ensure_connected()?;
    let n = g.n_nodes();

    let mut shortest_paths = DMatrix::zeros(n, n);
    let mut total = 0usize;
    let mut diameter = 0;
    for i in 0..n {
        for (j, d) in g.bfs_distances(i).into_iter().enumerate() {
            let d = d.ok_or_else(|| Error::Structural("graph is not connected".into()))?;
            shortest_paths[(i, j)] = d;
            if j > i {
                total += d;
            }
            diameter = diameter.max(d);
        }
    }
    let pairs = (n * (n - 1) / 2) as f64;
    let char_path_length = total as f64 / pairs;

    let clustering = (0..n).map(|i| local_clustering(g, i)).sum::<f64>() / n as f64;

    let (eigenvalues, _) = symmetric_spectrum(g.adjacency_matrix());
    let mut by_magnitude: Vec<f64> = eigenvalues.iter().map(|x| x.abs()).collect();
    by_magnitude.sort_by(|a, b| b.total_cmp(a));
    let spectral_gap = by_magnitude[0] - by_magnitude.get(1).copied().unwrap_or(0.0);
    let distinct_eigenvalues = cluster_eigenvalues(&eigenvalues).len();

    Ok(GraphMetrics {
        shortest_paths,
        char_path_length,
        diameter,
        clustering,
        degrees: g.degrees(),
        eigenvalues,
        spectral_gap,
        distinct_eigenvalues,
    })
}

fn local_clustering(g: &Graph, i: usize) -> f64 {
    let nb = g.neighbors(i);
    let d = nb.len();
    if d <= 1 {
        return 0.0;
    }
    let mut links = 0usize;
    for (a, &u) in nb.iter().enumerate() {
        for &v in &nb[a + 1..] {
            if g.has_edge(u, v) {
                links += 1;
            }
        }
    }
    2.0 * links as f64 / (d * (d - 1)) as f64
}
