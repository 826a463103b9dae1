use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{edge, rewire_small_world, Edge, Graph};
use crate::error::{Error, Result};

/// Network family with its size parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Topology {
    /// Path `0 - 1 - ... - (n-1)`.
    Chain { n: usize },
    /// Chain closed by the edge `(n-1, 0)`.
    Ring { n: usize },
    /// Hub `0` joined to leaves `1..n`.
    Star { n: usize },
    Complete { n: usize },
    /// Grid with nearest-neighbour links, node `r * cols + c`.
    SquareLattice { rows: usize, cols: usize },
    /// Rooted complete `arity`-ary tree; `depth` levels below the root.
    KaryTree { arity: usize, depth: usize },
    /// Central node with `branching` branches, each a complete
    /// `(branching - 1)`-ary cascade of `generations` shells.
    Dendrimer { branching: usize, generations: usize },
    /// Lattice after one degree-preserving rewiring lap with probability `rewiring`.
    SmallWorld {
        rows: usize,
        cols: usize,
        rewiring: f64,
    },
    /// Lattice after a full rewiring lap (`rewiring = 1`).
    RandomRegular { rows: usize, cols: usize },
    /// Preferential attachment growth from `links + 1` fully connected nodes.
    ScaleFree { n: usize, links: usize },
}

impl Topology {
    pub fn square(m: usize) -> Self {
        Topology::SquareLattice { rows: m, cols: m }
    }

    /// Node count implied by the parameters (no validation).
    pub fn n_nodes(&self) -> usize {
        match *self {
            Topology::Chain { n }
            | Topology::Ring { n }
            | Topology::Star { n }
            | Topology::Complete { n }
            | Topology::ScaleFree { n, .. } => n,
            Topology::SquareLattice { rows, cols }
            | Topology::SmallWorld { rows, cols, .. }
            | Topology::RandomRegular { rows, cols } => rows * cols,
            Topology::KaryTree { arity, depth } => (0..=depth).map(|l| arity.pow(l as u32)).sum(),
            Topology::Dendrimer {
                branching,
                generations,
            } => 1 + (0..generations)
                .map(|g| branching * (branching - 1).pow(g as u32))
                .sum::<usize>(),
        }
    }

    pub fn is_stochastic(&self) -> bool {
        matches!(
            self,
            Topology::SmallWorld { .. } | Topology::RandomRegular { .. } | Topology::ScaleFree { .. }
        )
    }

    /// Short family tag used in tables.
    pub fn family(&self) -> &'static str {
        match self {
            Topology::Chain { .. } => "chain",
            Topology::Ring { .. } => "ring",
            Topology::Star { .. } => "star",
            Topology::Complete { .. } => "complete",
            Topology::SquareLattice { .. } => "lattice",
            Topology::KaryTree { .. } => "kary_tree",
            Topology::Dendrimer { .. } => "dendrimer",
            Topology::SmallWorld { .. } => "small_world",
            Topology::RandomRegular { .. } => "random_regular",
            Topology::ScaleFree { .. } => "scale_free",
        }
    }

    fn validate(&self) -> Result<()> {
        let n_at_least = |name, n: usize, min: usize| {
            if n < min {
                Err(Error::param(name, format!("must be at least {min}, got {n}")))
            } else {
                Ok(())
            }
        };
        match *self {
            Topology::Chain { n } | Topology::Star { n } | Topology::Complete { n } => {
                n_at_least("n", n, 2)
            }
            Topology::Ring { n } => n_at_least("n", n, 3),
            Topology::SquareLattice { rows, cols } | Topology::RandomRegular { rows, cols } => {
                n_at_least("m", rows, 2)?;
                n_at_least("m", cols, 2)
            }
            Topology::SmallWorld {
                rows,
                cols,
                rewiring,
            } => {
                n_at_least("m", rows, 2)?;
                n_at_least("m", cols, 2)?;
                check_probability("r", rewiring)
            }
            Topology::KaryTree { arity, depth } => {
                n_at_least("arity", arity, 1)?;
                n_at_least("depth", depth, 1)
            }
            Topology::Dendrimer {
                branching,
                generations,
            } => {
                n_at_least("branching", branching, 2)?;
                n_at_least("generations", generations, 1)
            }
            Topology::ScaleFree { n, links } => {
                n_at_least("v", links, 1)?;
                if n <= links + 1 {
                    return Err(Error::param(
                        "n",
                        format!("scale-free growth needs n > v + 1 = {}, got {n}", links + 1),
                    ));
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Topology::Chain { n } => write!(f, "chain(n={n})"),
            Topology::Ring { n } => write!(f, "ring(n={n})"),
            Topology::Star { n } => write!(f, "star(n={n})"),
            Topology::Complete { n } => write!(f, "complete(n={n})"),
            Topology::SquareLattice { rows, cols } => write!(f, "lattice({rows}x{cols})"),
            Topology::KaryTree { arity, depth } => write!(f, "kary_tree(k={arity},depth={depth})"),
            Topology::Dendrimer {
                branching,
                generations,
            } => write!(f, "dendrimer(b={branching},g={generations})"),
            Topology::SmallWorld {
                rows,
                cols,
                rewiring,
            } => write!(f, "small_world({rows}x{cols},r={rewiring})"),
            Topology::RandomRegular { rows, cols } => write!(f, "random_regular({rows}x{cols})"),
            Topology::ScaleFree { n, links } => write!(f, "scale_free(n={n},v={links})"),
        }
    }
}

/// A network family plus the seed for its stochastic construction steps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TopologySpec {
    pub topology: Topology,
    pub seed: u64,
}

impl TopologySpec {
    pub fn new(topology: Topology, seed: u64) -> Self {
        Self { topology, seed }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

impl fmt::Display for TopologySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.topology.is_stochastic() {
            write!(f, "{}[seed={}]", self.topology, self.seed)
        } else {
            write!(f, "{}", self.topology)
        }
    }
}

pub(crate) fn check_probability(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::param(name, format!("must lie in [0, 1], got {x}")))
    }
}

/// Builds the requested network. Deterministic for a fixed spec.
pub fn generate_graph(spec: &TopologySpec) -> Result<Graph> {
    let topology = spec.topology;
    topology.validate()?;
    let graph = match topology {
        Topology::Chain { n } => chain(n),
        Topology::Ring { n } => {
            let mut edges: Vec<Edge> = (1..n).map(|i| (i - 1, i)).collect();
            edges.push((0, n - 1));
            finish(n, edges)
        }
        Topology::Star { n } => finish(n, (1..n).map(|i| (0, i)).collect()),
        Topology::Complete { n } => complete(n),
        Topology::SquareLattice { rows, cols } => lattice(rows, cols),
        Topology::KaryTree { arity, .. } => {
            let n = topology.n_nodes();
            // BFS numbering: children of node i are arity*i + 1 ..= arity*i + arity.
            finish(n, (1..n).map(|c| ((c - 1) / arity, c)).collect())
        }
        Topology::Dendrimer {
            branching,
            generations,
        } => dendrimer(branching, generations),
        Topology::SmallWorld {
            rows,
            cols,
            rewiring,
        } => rewire_small_world(&lattice(rows, cols), rewiring, spec.seed)?,
        Topology::RandomRegular { rows, cols } => {
            rewire_small_world(&lattice(rows, cols), 1.0, spec.seed)?
        }
        Topology::ScaleFree { n, links } => generate_scale_free(n, links, spec.seed)?,
    };
    debug_assert!(graph.is_connected());
    Ok(graph)
}

fn finish(n: usize, mut edges: Vec<Edge>) -> Graph {
    for e in &mut edges {
        *e = edge(e.0, e.1);
    }
    edges.sort_unstable();
    Graph::from_sorted(n, edges)
}

fn chain(n: usize) -> Graph {
    finish(n, (1..n).map(|i| (i - 1, i)).collect())
}

fn complete(n: usize) -> Graph {
    let edges = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    Graph::from_sorted(n, edges)
}

pub(crate) fn lattice(rows: usize, cols: usize) -> Graph {
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let i = r * cols + c;
            if c + 1 < cols {
                edges.push((i, i + 1));
            }
            if r + 1 < rows {
                edges.push((i, i + cols));
            }
        }
    }
    finish(rows * cols, edges)
}

fn dendrimer(branching: usize, generations: usize) -> Graph {
    let mut edges = Vec::new();
    let mut shell: Vec<usize> = Vec::new();
    let mut next = 1;
    for _ in 0..branching {
        edges.push((0, next));
        shell.push(next);
        next += 1;
    }
    for _ in 1..generations {
        let mut grown = Vec::with_capacity(shell.len() * (branching - 1));
        for &parent in &shell {
            for _ in 0..branching - 1 {
                edges.push((parent, next));
                grown.push(next);
                next += 1;
            }
        }
        shell = grown;
    }
    finish(next, edges)
}

/// Preferential-attachment growth. Starts from `links + 1` fully connected
/// nodes; every new node attaches `links` distinct edges, picking old node
/// `i` with probability `d_i / sum_j d_j` (degrees frozen for the step,
/// successive sampling without replacement).
pub fn generate_scale_free(n: usize, links: usize, seed: u64) -> Result<Graph> {
    Topology::ScaleFree { n, links }.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let core = links + 1;
    let mut edges: Vec<Edge> = (0..core)
        .flat_map(|i| (i + 1..core).map(move |j| (i, j)))
        .collect();
    let mut degree = vec![0usize; n];
    for d in degree.iter_mut().take(core) {
        *d = links;
    }
    let mut picked = Vec::with_capacity(links);
    for new in core..n {
        picked.clear();
        let mut total: usize = degree[..new].iter().sum();
        for _ in 0..links {
            let mut target = rng.random_range(0..total);
            let mut choice = usize::MAX;
            for (i, &d) in degree[..new].iter().enumerate() {
                if picked.contains(&i) {
                    continue;
                }
                if target < d {
                    choice = i;
                    break;
                }
                target -= d;
            }
            debug_assert!(choice != usize::MAX);
            total -= degree[choice];
            picked.push(choice);
        }
        for &old in &picked {
            edges.push((old, new));
            degree[old] += 1;
        }
        degree[new] = links;
    }
    Ok(finish(n, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(t: Topology) -> Graph {
        generate_graph(&TopologySpec::new(t, 1)).unwrap()
    }

    #[test]
    fn chain_has_unit_end_degrees() {
        let g = build(Topology::Chain { n: 35 });
        assert_eq!(g.n_edges(), 34);
        assert_eq!(g.degree(0), 1);
        assert_eq!(g.degree(34), 1);
        assert!((1..34).all(|i| g.degree(i) == 2));
    }

    #[test]
    fn complete_six_has_fifteen_edges() {
        let g = build(Topology::Complete { n: 6 });
        assert_eq!(g.n_edges(), 15);
        assert!(g.is_complete());
    }

    #[test]
    fn lattice_counts() {
        let g = build(Topology::square(14));
        assert_eq!(g.n_nodes(), 196);
        assert_eq!(g.n_edges(), 2 * 14 * 13);
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.degree(195), 2);
        assert_eq!(g.degree(15), 4);
        let rect = build(Topology::SquareLattice { rows: 10, cols: 20 });
        assert_eq!(rect.n_nodes(), 200);
    }

    #[test]
    fn trees_and_dendrimers() {
        let t = build(Topology::KaryTree { arity: 2, depth: 3 });
        assert_eq!(t.n_nodes(), 15);
        assert_eq!(t.n_edges(), 14);
        assert_eq!(t.degree(0), 2);
        assert_eq!(t.degree(1), 3);
        let d = build(Topology::Dendrimer {
            branching: 3,
            generations: 3,
        });
        assert_eq!(d.n_nodes(), 1 + 3 + 6 + 12);
        assert_eq!(Topology::Dendrimer { branching: 3, generations: 3 }.n_nodes(), 22);
        assert_eq!(d.degree(0), 3);
        assert_eq!(d.degree(1), 3);
        assert_eq!(d.degree(21), 1);
        assert!(d.is_connected());
    }

    #[test]
    fn ring_and_star() {
        let r = build(Topology::Ring { n: 7 });
        assert!(r.degrees().iter().all(|&d| d == 2));
        let s = build(Topology::Star { n: 7 });
        assert_eq!(s.degree(0), 6);
    }

    #[test]
    fn invalid_parameters() {
        for t in [
            Topology::square(1),
            Topology::Chain { n: 1 },
            Topology::Ring { n: 2 },
            Topology::SmallWorld {
                rows: 4,
                cols: 4,
                rewiring: 1.5,
            },
            Topology::ScaleFree { n: 3, links: 2 },
            Topology::ScaleFree { n: 10, links: 0 },
        ] {
            assert!(
                matches!(
                    generate_graph(&TopologySpec::new(t, 0)),
                    Err(Error::Parameter { .. })
                ),
                "{t}"
            );
        }
    }

    #[test]
    fn scale_free_first_step() {
        let g = generate_scale_free(5, 3, 11).unwrap();
        assert_eq!(g.n_edges(), 6 + 3);
        assert_eq!(g.degree(4), 3);
        for i in 0..4 {
            for j in i + 1..4 {
                assert!(g.has_edge(i, j));
            }
        }
    }

    #[test]
    fn scale_free_is_deterministic() {
        let a = generate_scale_free(50, 2, 99).unwrap();
        let b = generate_scale_free(50, 2, 99).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert!(a.is_connected());
        assert_eq!(a.n_edges(), 3 + 47 * 2);
        let c = generate_scale_free(50, 2, 100).unwrap();
        assert_ne!(a.edges(), c.edges());
    }
}
