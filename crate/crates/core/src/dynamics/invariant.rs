use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::{cluster_eigenvalues, symmetric_spectrum, Graph};

/// Eigenstates of the Hamiltonian with no amplitude on the sink node.
///
/// Population in this subspace only picks up phases under the coherent
/// walk and never reaches the sink.
#[derive(Clone, Debug)]
pub struct InvariantSubspace {
    pub dimension: usize,
    /// Orthogonal projector onto the subspace.
    pub projector: DMatrix<f64>,
}

impl InvariantSubspace {
    /// `||P |site>||^2`, the share of a localized start that stays trapped.
    pub fn trapped_weight(&self, site: usize) -> f64 {
        self.projector[(site, site)]
    }
}

/// Within each eigenspace of `A`, keeps the part orthogonal to `|sink>`.
pub fn invariant_subspace(g: &Graph, sink: usize) -> Result<InvariantSubspace> {
    g.ensure_connected()?;
    let n = g.n_nodes();
    if sink >= n {
        return Err(Error::param(
            "sink",
            format!("sink {sink} is not a node of a {n}-node graph"),
        ));
    }
    let (values, vectors) = symmetric_spectrum(g.adjacency_matrix());
    let mut projector = DMatrix::zeros(n, n);
    let mut dimension = 0;
    for cluster in cluster_eigenvalues(&values) {
        let m = cluster.len();
        let v = vectors.columns(cluster.start, m).into_owned();
        let row: Vec<f64> = (0..m).map(|c| v[(sink, c)]).collect();
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        let basis = if norm < 1e-10 {
            v
        } else if m == 1 {
            continue;
        } else {
            // Orthonormal complement of the sink row inside the cluster:
            // QR of [r, e_k (k != argmax |r_k|)], dropping the first column.
            let pivot = (0..m)
                .max_by(|&a, &b| row[a].abs().total_cmp(&row[b].abs()))
                .unwrap_or(0);
            let mut m_in = DMatrix::zeros(m, m);
            for (k, &r) in row.iter().enumerate() {
                m_in[(k, 0)] = r / norm;
            }
            let mut col = 1;
            for k in (0..m).filter(|&k| k != pivot) {
                m_in[(k, col)] = 1.0;
                col += 1;
            }
            let q = m_in.qr().q();
            v * q.columns(1, m - 1)
        };
        dimension += basis.ncols();
        projector += &basis * basis.transpose();
    }
    Ok(InvariantSubspace {
        dimension,
        projector,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_graph, Topology, TopologySpec};

    #[test]
    fn complete_graph_traps_all_but_one_over_n_minus_one() {
        let g = generate_graph(&TopologySpec::new(Topology::Complete { n: 6 }, 0)).unwrap();
        let inv = invariant_subspace(&g, 5).unwrap();
        assert_eq!(inv.dimension, 4);
        assert!((inv.trapped_weight(0) - 0.8).abs() < 1e-12);
        assert!(inv.trapped_weight(5).abs() < 1e-12);
        let p = &inv.projector;
        assert!((p * p - p).abs().max() < 1e-12);
    }

    #[test]
    fn chain_has_no_trapped_states() {
        let g = generate_graph(&TopologySpec::new(Topology::Chain { n: 5 }, 0)).unwrap();
        assert_eq!(invariant_subspace(&g, 4).unwrap().dimension, 0);
    }
}
