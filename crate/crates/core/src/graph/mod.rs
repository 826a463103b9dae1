//! Undirected simple graphs, the network families used for transport
//! experiments, and their topological and spectral observables.

mod format;
mod generators;
mod metrics;
mod rewire;
mod transition;

use std::collections::VecDeque;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub use format::{read_graph, write_graph};
pub(crate) use generators::check_probability;
pub use generators::{generate_graph, generate_scale_free, Topology, TopologySpec};
pub use metrics::{cluster_eigenvalues, compute_metrics, symmetric_spectrum, GraphMetrics};
pub use rewire::{perturb_links, rewire_small_world, PerturbMode, MAX_RETRIES};
pub use transition::{transition_matrix, TransitionMatrix};

/// Normalized undirected edge, smaller endpoint first.
pub type Edge = (usize, usize);

#[inline]
pub(crate) fn edge(a: usize, b: usize) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Undirected simple graph on nodes `0..n`.
///
/// Edges are kept sorted, so two graphs with the same edge set compare
/// equal and serialize identically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, rejecting loops, duplicate edges and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "a graph needs at least one node"));
        }
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Structural(format!(
                    "edge ({a}, {b}) out of range for {n} nodes"
                )));
            }
            if a == b {
                return Err(Error::Structural(format!("loop at node {a}")));
            }
            list.push(edge(a, b));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Structural(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_sorted(n, list))
    }

    /// `edges` must already be normalized, sorted and free of duplicates.
    pub(crate) fn from_sorted(n: usize, edges: Vec<Edge>) -> Self {
        let mut neighbors = vec![Vec::new(); n];
        for &(a, b) in &edges {
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Self {
            n,
            edges,
            neighbors,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && a < self.n && b < self.n && self.neighbors[a].binary_search(&b).is_ok()
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * (self.n - 1) / 2
    }

    /// Symmetric 0/1 adjacency matrix.
    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for &(i, j) in &self.edges {
            a[(i, j)] = 1.0;
            a[(j, i)] = 1.0;
        }
        a
    }

    /// Hop distances from `source`; `None` for unreachable nodes.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &v in &self.neighbors[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_distances(0).iter().all(Option::is_some)
    }

    /// Errors unless the graph is a single component with no isolated node.
    pub fn ensure_connected(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Structural(
                "transport needs at least two nodes".into(),
            ));
        }
        if !self.is_connected() {
            return Err(Error::Structural("graph is not connected".into()));
        }
        Ok(())
    }

    /// Sorted degree multiset.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d = self.degrees();
        d.sort_unstable();
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_duplicates() {
        assert!(matches!(
            Graph::from_edges(3, [(0, 0)]),
            Err(Error::Structural(_))
        ));
        assert!(matches!(
            Graph::from_edges(3, [(0, 1), (1, 0)]),
            Err(Error::Structural(_))
        ));
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
    }

    #[test]
    fn adjacency_is_symmetric_with_zero_diagonal() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let a = g.adjacency_matrix();
        assert_eq!(a, a.transpose());
        assert!((0..4).all(|i| a[(i, i)] == 0.0));
        assert_eq!(g.degrees(), vec![3, 2, 3, 2]);
    }

    #[test]
    fn connectivity() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!g.is_connected());
        assert!(g.ensure_connected().is_err());
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(g.ensure_connected().is_ok());
    }
}
