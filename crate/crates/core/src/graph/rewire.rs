use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::generators::check_probability;
use super::{edge, Edge, Graph};
use crate::error::{Error, Result};

/// Attempts allowed per swap or deletion before giving up.
pub const MAX_RETRIES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PerturbMode {
    Rewire,
    Delete,
}

impl std::fmt::Display for PerturbMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PerturbMode::Rewire => "rewire",
            PerturbMode::Delete => "delete",
        })
    }
}

/// Mutable edge set with O(1) uniform sampling and removal.
struct Workspace {
    n: usize,
    edges: Vec<Edge>,
    slot: HashMap<Edge, usize>,
    neighbors: Vec<Vec<usize>>,
}

impl Workspace {
    fn new(g: &Graph) -> Self {
        let edges = g.edges().to_vec();
        let slot = edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        let neighbors = (0..g.n_nodes()).map(|i| g.neighbors(i).to_vec()).collect();
        Self {
            n: g.n_nodes(),
            edges,
            slot,
            neighbors,
        }
    }

    fn contains(&self, a: usize, b: usize) -> bool {
        self.slot.contains_key(&edge(a, b))
    }

    fn insert(&mut self, a: usize, b: usize) {
        let e = edge(a, b);
        self.slot.insert(e, self.edges.len());
        self.edges.push(e);
        self.neighbors[a].push(b);
        self.neighbors[b].push(a);
    }

    fn remove(&mut self, a: usize, b: usize) {
        let e = edge(a, b);
        let k = self.slot.remove(&e).expect("edge present");
        self.edges.swap_remove(k);
        if k < self.edges.len() {
            self.slot.insert(self.edges[k], k);
        }
        self.neighbors[a].retain(|&x| x != b);
        self.neighbors[b].retain(|&x| x != a);
    }

    fn connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.neighbors[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n
    }

    /// Replaces `i1-i2`, `j1-j2` by `i1-j2`, `j1-i2` if the result stays a
    /// connected simple graph.
    fn try_swap(&mut self, (i1, i2): Edge, (j1, j2): Edge) -> bool {
        if j1 == i1 || j1 == i2 || j2 == i1 || j2 == i2 {
            return false;
        }
        if self.contains(i1, j2) || self.contains(j1, i2) {
            return false;
        }
        self.remove(i1, i2);
        self.remove(j1, j2);
        self.insert(i1, j2);
        self.insert(j1, i2);
        if self.connected() {
            return true;
        }
        self.remove(i1, j2);
        self.remove(j1, i2);
        self.insert(i1, i2);
        self.insert(j1, j2);
        false
    }

    fn random_oriented_edge(&self, rng: &mut impl Rng) -> Edge {
        let (a, b) = self.edges[rng.random_range(0..self.edges.len())];
        if rng.random_bool(0.5) {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Swaps `first` with a uniformly drawn partner edge, retrying up to
    /// [`MAX_RETRIES`] draws.
    fn swap_with_random_partner(&mut self, first: Edge, rng: &mut impl Rng) -> bool {
        (0..MAX_RETRIES).any(|_| {
            let partner = self.random_oriented_edge(rng);
            self.try_swap(first, partner)
        })
    }

    fn into_graph(self) -> Graph {
        let mut edges = self.edges;
        edges.sort_unstable();
        Graph::from_sorted(self.n, edges)
    }
}

/// One degree-preserving rewiring lap.
///
/// Vertices are visited in index order. At vertex `i1` one incident edge
/// `i1-i2` is picked at random and, with probability `r`, swapped with a
/// random partner edge `j1-j2` into `i1-j2`, `j1-i2`. Swaps creating a
/// duplicate edge or disconnecting the graph are redrawn.
///
/// Each vertex draws from its own random stream, so for a fixed seed the
/// set of vertices that attempt a swap grows monotonically with `r`.
pub fn rewire_small_world(g: &Graph, r: f64, seed: u64) -> Result<Graph> {
    check_probability("r", r)?;
    g.ensure_connected()?;
    let mut work = Workspace::new(g);
    for i1 in 0..g.n_nodes() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i1 as u64);
        let coin: f64 = rng.random();
        let degree = work.neighbors[i1].len();
        if coin >= r || degree == 0 {
            continue;
        }
        let i2 = work.neighbors[i1][rng.random_range(0..degree)];
        if !work.swap_with_random_partner((i1, i2), &mut rng) {
            return Err(Error::Construction {
                retries: MAX_RETRIES,
                reason: format!("no admissible partner edge for vertex {i1}"),
            });
        }
    }
    Ok(work.into_graph())
}

/// Rewires (degree-preserving swaps) or deletes `count` random links while
/// keeping the graph connected.
pub fn perturb_links(g: &Graph, mode: PerturbMode, count: usize, seed: u64) -> Result<Graph> {
    g.ensure_connected()?;
    if mode == PerturbMode::Delete && count >= g.n_edges() {
        return Err(Error::param(
            "count",
            format!(
                "cannot delete {count} of {} links and stay connected",
                g.n_edges()
            ),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Separate stream from the small-world lap for the same seed.
    rng.set_stream(u64::MAX - mode as u64);
    let mut work = Workspace::new(g);
    for achieved in 0..count {
        let done = match mode {
            PerturbMode::Rewire => (0..MAX_RETRIES).any(|_| {
                let first = work.random_oriented_edge(&mut rng);
                let partner = work.random_oriented_edge(&mut rng);
                work.try_swap(first, partner)
            }),
            PerturbMode::Delete => (0..MAX_RETRIES).any(|_| {
                let (a, b) = work.random_oriented_edge(&mut rng);
                work.remove(a, b);
                if work.connected() {
                    true
                } else {
                    work.insert(a, b);
                    false
                }
            }),
        };
        if !done {
            return Err(Error::Perturbation {
                achieved,
                requested: count,
                reason: format!("no admissible link after {MAX_RETRIES} attempts"),
            });
        }
    }
    Ok(work.into_graph())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::lattice;
    use crate::graph::{compute_metrics, generate_graph, Topology, TopologySpec};

    #[test]
    fn zero_rewiring_is_identity() {
        let g = lattice(6, 6);
        assert_eq!(rewire_small_world(&g, 0.0, 3).unwrap(), g);
    }

    #[test]
    fn full_rewiring_keeps_degrees() {
        let g = lattice(14, 14);
        let rg = rewire_small_world(&g, 1.0, 5).unwrap();
        assert_ne!(rg, g);
        assert_eq!(rg.degrees(), g.degrees());
        assert!(rg.is_connected());
    }

    #[test]
    fn small_world_regime() {
        let g = lattice(14, 14);
        let sw = rewire_small_world(&g, 0.09, 2024).unwrap();
        let before = compute_metrics(&g).unwrap();
        let after = compute_metrics(&sw).unwrap();
        assert!(after.char_path_length < before.char_path_length);
        // A lattice has no triangles; rewiring a few links cannot create many.
        assert!((after.clustering - before.clustering).abs() <= 0.25 * before.clustering.max(0.05));
    }

    #[test]
    fn rejects_bad_probability() {
        let g = lattice(3, 3);
        assert!(matches!(
            rewire_small_world(&g, -0.1, 0),
            Err(Error::Parameter { name: "r", .. })
        ));
    }

    #[test]
    fn delete_zero_is_identity() {
        let g = lattice(5, 5);
        assert_eq!(perturb_links(&g, PerturbMode::Delete, 0, 1).unwrap(), g);
    }

    #[test]
    fn deleting_from_chain_fails() {
        let g = generate_graph(&TopologySpec::new(Topology::Chain { n: 5 }, 0)).unwrap();
        match perturb_links(&g, PerturbMode::Delete, 1, 9) {
            Err(Error::Perturbation { achieved, .. }) => assert_eq!(achieved, 0),
            other => panic!("expected perturbation error, got {other:?}"),
        }
    }

    #[test]
    fn rewired_links_keep_degree_sequence() {
        let g = lattice(14, 14);
        let h = perturb_links(&g, PerturbMode::Rewire, 20, 17).unwrap();
        assert_eq!(h.degree_sequence(), g.degree_sequence());
        assert_ne!(h, g);
    }

    #[test]
    fn deleted_links_stay_connected() {
        let g = lattice(14, 14);
        let h = perturb_links(&g, PerturbMode::Delete, 40, 17).unwrap();
        assert_eq!(h.n_edges(), g.n_edges() - 40);
        assert!(h.is_connected());
    }
}
