use nalgebra::DMatrix;
use proptest::prelude::*;
use qsw_core::graph::*;

/// Connected graph on 2..=12 nodes: a random spanning tree plus any subset
/// of the remaining pairs.
fn connected_graph() -> impl Strategy<Value = Graph> {
    (2usize..=12)
        .prop_flat_map(|n| {
            let parents: Vec<_> = (1..n).map(|v| 0..v).collect();
            (Just(n), parents, prop::collection::vec(prop::bool::weighted(0.2), n * n))
        })
        .prop_map(|(n, parents, extra)| {
            let mut edges: Vec<_> = parents.into_iter().enumerate().map(|(k, p)| (p, k + 1)).collect();
            for a in 0..n {
                for b in a + 1..n {
                    if extra[a * n + b] && !edges.contains(&(a, b)) {
                        edges.push((a, b));
                    }
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
}

/// Shortest paths straight from the definition: the least `k` with
/// `(A^k)_ij > 0`.
fn matrix_power_distances(g: &Graph) -> DMatrix<usize> {
    let n = g.n_nodes();
    let a = g.adjacency_matrix();
    let mut dist = DMatrix::from_element(n, n, usize::MAX);
    let mut power = DMatrix::<f64>::identity(n, n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if power[(i, j)] > 0.0 && dist[(i, j)] == usize::MAX {
                    dist[(i, j)] = k;
                }
            }
        }
        // Keep entries as reachability flags so nothing overflows.
        power = (&power * &a).map(|x| if x > 0.0 { 1.0 } else { 0.0 });
    }
    dist
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bfs_matches_matrix_powers(g in connected_graph()) {
        let m = compute_metrics(&g).unwrap();
        prop_assert_eq!(&m.shortest_paths, &matrix_power_distances(&g));
    }

    #[test]
    fn distinct_eigenvalues_exceed_diameter(g in connected_graph()) {
        let m = compute_metrics(&g).unwrap();
        prop_assert!(m.distinct_eigenvalues >= m.diameter + 1);
    }

    #[test]
    fn spectrum_traces(g in connected_graph()) {
        let m = compute_metrics(&g).unwrap();
        let sum: f64 = m.eigenvalues.iter().sum();
        let squares: f64 = m.eigenvalues.iter().map(|x| x * x).sum();
        prop_assert!(sum.abs() < 1e-9);
        prop_assert!((squares - 2.0 * g.n_edges() as f64).abs() < 1e-9);
        prop_assert!(m.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn path_length_and_diameter_agree(g in connected_graph()) {
        let m = compute_metrics(&g).unwrap();
        let n = g.n_nodes();
        let mut total = 0usize;
        for i in 0..n {
            for j in i + 1..n {
                total += m.shortest_paths[(i, j)];
            }
        }
        let mean = 2.0 * total as f64 / (n * (n - 1)) as f64;
        prop_assert!((m.char_path_length - mean).abs() < 1e-12);
        prop_assert_eq!(m.diameter, *m.shortest_paths.iter().max().unwrap());
        prop_assert!((0.0..=1.0).contains(&m.clustering));
    }

    #[test]
    fn transition_columns_are_stochastic(g in connected_graph()) {
        let t = transition_matrix(&g).unwrap();
        for j in 0..g.n_nodes() {
            let col: f64 = (0..g.n_nodes()).map(|i| t.get(i, j)).sum();
            prop_assert!((col - 1.0).abs() < 1e-12);
        }
        prop_assert_eq!(t.graph(), g);
    }

    #[test]
    fn rewiring_preserves_degrees(g in connected_graph(), r in 0.0f64..=1.0, seed in any::<u64>()) {
        // A failed swap is a legitimate outcome on tiny graphs; when it
        // succeeds the degrees must be untouched.
        if let Ok(h) = rewire_small_world(&g, r, seed) {
            prop_assert_eq!(h.degrees(), g.degrees());
            prop_assert!(h.is_connected());
        }
        if let Ok(h) = perturb_links(&g, PerturbMode::Rewire, 3, seed) {
            prop_assert_eq!(h.degrees(), g.degrees());
            prop_assert!(h.is_connected());
        }
    }

    #[test]
    fn text_format_round_trips(g in connected_graph()) {
        prop_assert_eq!(read_graph(&write_graph(&g)).unwrap(), g);
    }
}

#[test]
fn complete_graph_spectrum_is_exact() {
    for n in 2..=12 {
        let g = generate_graph(&TopologySpec::new(Topology::Complete { n }, 0)).unwrap();
        let m = compute_metrics(&g).unwrap();
        assert!((m.eigenvalues[0] - (n as f64 - 1.0)).abs() < 1e-10);
        assert!(m.eigenvalues[1..].iter().all(|&x| (x + 1.0).abs() < 1e-10));
        assert_eq!(m.distinct_eigenvalues, 2);
        assert_eq!(m.diameter, 1);
    }
}

#[test]
fn reruns_with_a_fixed_seed_are_byte_identical() {
    let specs = [
        Topology::ScaleFree { n: 40, links: 2 },
        Topology::SmallWorld { rows: 6, cols: 6, rewiring: 0.3 },
        Topology::RandomRegular { rows: 5, cols: 8 },
        Topology::SquareLattice { rows: 4, cols: 4 },
    ];
    for topology in specs {
        let spec = TopologySpec::new(topology, 17);
        let a = write_graph(&generate_graph(&spec).unwrap());
        let b = write_graph(&generate_graph(&spec).unwrap());
        assert_eq!(a, b);
    }
    let lattice = generate_graph(&TopologySpec::new(Topology::square(6), 0)).unwrap();
    for mode in [PerturbMode::Rewire, PerturbMode::Delete] {
        let a = perturb_links(&lattice, mode, 8, 3).unwrap();
        let b = perturb_links(&lattice, mode, 8, 3).unwrap();
        assert_eq!(write_graph(&a), write_graph(&b));
    }
}

#[test]
fn random_regular_is_a_fully_rewired_lattice() {
    let g = generate_graph(&TopologySpec::new(Topology::RandomRegular { rows: 10, cols: 20 }, 5)).unwrap();
    let lattice = generate_graph(&TopologySpec::new(Topology::SquareLattice { rows: 10, cols: 20 }, 0)).unwrap();
    assert_eq!(g.degrees(), lattice.degrees());
    assert_ne!(g, lattice);
    let m = compute_metrics(&g).unwrap();
    let l = compute_metrics(&lattice).unwrap();
    assert!(m.char_path_length < 0.5 * l.char_path_length);
}
