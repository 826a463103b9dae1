use nalgebra::DMatrix;

use super::Graph;
use crate::error::Result;

/// Column-stochastic hopping matrix, `t[(i, j)] = A_ij / d_j` is the
/// probability of a jump `j -> i`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix {
    t: DMatrix<f64>,
}

impl TransitionMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.t
    }

    pub fn n_nodes(&self) -> usize {
        self.t.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.t[(i, j)]
    }

    /// Adjacency pattern recovered from the non-zero entries.
    pub fn graph(&self) -> Graph {
        let n = self.n_nodes();
        let edges = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.t[(i, j)] > 0.0)
            .collect();
        Graph::from_sorted(n, edges)
    }
}

pub fn transition_matrix(g: &Graph) -> Result<TransitionMatrix> {
    g.ensure_connected()?;
    let n = g.n_nodes();
    let mut t = DMatrix::zeros(n, n);
    for j in 0..n {
        let w = 1.0 / g.degree(j) as f64;
        for &i in g.neighbors(j) {
            t[(i, j)] = w;
        }
    }
    Ok(TransitionMatrix { t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_graph, generate_scale_free, Topology, TopologySpec};

    #[test]
    fn chain_three_middle_column() {
        let g = generate_graph(&TopologySpec::new(Topology::Chain { n: 3 }, 0)).unwrap();
        let t = transition_matrix(&g).unwrap();
        assert_eq!(t.matrix().column(1).as_slice(), &[0.5, 0.0, 0.5]);
        assert_eq!(t.get(1, 0), 1.0);
    }

    #[test]
    fn complete_four_off_diagonal() {
        let g = generate_graph(&TopologySpec::new(Topology::Complete { n: 4 }, 0)).unwrap();
        let t = transition_matrix(&g).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { 0.0 } else { 1.0 / 3.0 };
                assert_eq!(t.get(i, j), expected);
            }
        }
    }

    #[test]
    fn columns_sum_to_one_and_pattern_matches() {
        let g = generate_scale_free(40, 2, 3).unwrap();
        let t = transition_matrix(&g).unwrap();
        for j in 0..40 {
            assert!((t.matrix().column(j).sum() - 1.0).abs() < 1e-14);
            for i in 0..40 {
                assert_eq!(t.get(i, j) > 0.0, g.has_edge(i, j));
            }
        }
        assert_eq!(t.graph(), g);
    }
}
