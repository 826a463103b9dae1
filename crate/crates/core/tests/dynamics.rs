mod common;

use common::*;
use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use qsw_core::dynamics::*;
use qsw_core::graph::*;
use qsw_core::Error;

fn graph(t: Topology) -> Graph {
    generate_graph(&TopologySpec::new(t, 0)).unwrap()
}

fn rk4(dt: f64) -> EvolveSettings {
    EvolveSettings {
        integrator: Integrator::Rk4 { dt: Some(dt) },
        ..EvolveSettings::default()
    }
}

#[test]
fn derivative_matches_explicit_jump_operators() {
    for seed in 0..12u64 {
        let n = 3 + (seed as usize % 4);
        let g = random_connected(n, 0.3, seed);
        let convention = if seed % 2 == 0 {
            AmplitudeConvention::SqrtRate
        } else {
            AmplitudeConvention::Literal
        };
        let cfg = QswConfig {
            convention,
            ..QswConfig::new(seed as f64 / 11.0, n - 1).with_gamma(0.3 + seed as f64 * 0.1)
        };
        let state = random_state(n, 0.2, 100 + seed);
        let d = qsw_derivative(&state, &cfg, &transition_matrix(&g).unwrap()).unwrap();
        let (reference, dsunk) = lindblad_rhs(&g, &cfg, &state.rho);
        assert!(max_diff(&d.drho, &reference) < 1e-13, "seed {seed}");
        assert!((d.dsunk - dsunk).abs() < 1e-13);
        // d/dt (trace + sunk) = 0
        let dtrace: f64 = d.drho.diagonal().iter().map(|z| z.re).sum();
        assert!((dtrace + d.dsunk).abs() < 1e-13);
    }
}

#[test]
fn classical_limit_of_the_derivative() {
    let g = graph(Topology::Star { n: 5 });
    let t = transition_matrix(&g).unwrap();
    let cfg = QswConfig::new(1.0, 4).with_gamma(0.0);
    let mut state = DensityState::maximally_mixed(5);
    state.rho[(0, 0)] = C::new(0.6, 0.0);
    state.rho[(1, 1)] = C::new(0.1, 0.0);
    state.rho[(0, 2)] = C::new(0.05, 0.02);
    state.rho[(2, 0)] = C::new(0.05, -0.02);
    let d = qsw_derivative(&state, &cfg, &t).unwrap();
    let q: Vec<f64> = state.populations();
    for i in 0..5 {
        let expected: f64 = (0..5).map(|j| t.get(i, j) * q[j]).sum::<f64>() - q[i];
        assert!((d.drho[(i, i)].re - expected).abs() < 1e-14);
    }
    // Coherences only decay, at unit rate for sqrt_rate amplitudes.
    assert!((d.drho[(0, 2)] + state.rho[(0, 2)]).norm() < 1e-14);
}

#[test]
fn unitary_limit_of_the_derivative() {
    let g = random_connected(5, 0.4, 3);
    let a = g.adjacency_matrix().map(|x| C::new(x, 0.0));
    let state = random_state(5, 0.0, 4);
    let cfg = QswConfig::new(0.0, 4).with_gamma(0.0);
    let d = qsw_derivative(&state, &cfg, &transition_matrix(&g).unwrap()).unwrap();
    let reference = (&a * &state.rho - &state.rho * &a) * C::new(0.0, -1.0);
    assert!(max_diff(&d.drho, &reference) < 1e-14);
    assert_eq!(d.dsunk, 0.0);
}

#[test]
fn derivative_rejects_mismatched_dimensions() {
    let g = graph(Topology::Chain { n: 4 });
    let state = DensityState::maximally_mixed(3);
    let err = qsw_derivative(&state, &QswConfig::new(0.5, 2), &transition_matrix(&g).unwrap());
    assert!(matches!(err, Err(Error::Structural(_))));
}

#[test]
fn propagators_match_the_exact_superoperator_exponential() {
    let cases = [
        (random_connected(5, 0.3, 7), 0.0, 1.0),
        (random_connected(5, 0.3, 8), 0.1, 1.0),
        (random_connected(6, 0.5, 9), 0.5, 0.4),
        // Damping dominates: the Chebyshev expansion switches to real foci.
        (random_connected(4, 0.0, 10), 1.0, 3.0),
        // Degenerate spectrum plus a sink: strongly non-normal generator.
        (graph(Topology::Complete { n: 12 }), 0.0, 1.0),
        (graph(Topology::Complete { n: 12 }), 0.05, 1.0),
    ];
    for (g, p, gamma) in cases {
        let n = g.n_nodes();
        let cfg = QswConfig::new(p, n - 1).with_gamma(gamma);
        let start = DensityState::localized(n, 0).unwrap();
        let exact = exact_state(&g, &cfg, &start, 7.0);
        let gen = Generator::new(&g, &cfg).unwrap();
        for integrator in [Integrator::Rk4 { dt: None }, Integrator::chebyshev()] {
            let mut x = start.pack();
            Propagator::new(&gen, integrator).advance(&mut x, 7.0);
            let got = DensityState::unpack(n, &x, 7.0);
            let err = max_diff(&got.rho, &exact.rho).max((got.sunk - exact.sunk).abs());
            let tol = match integrator {
                Integrator::Rk4 { .. } => 1e-6,
                Integrator::Chebyshev { .. } => 1e-11,
            };
            assert!(err < tol, "{integrator} p={p}: {err:e}");
        }
    }
}

#[test]
fn rk4_converges_at_fourth_order() {
    let g = random_connected(5, 0.4, 21);
    let cfg = QswConfig::new(0.3, 4);
    let start = DensityState::localized(5, 0).unwrap();
    let exact = exact_state(&g, &cfg, &start, 3.0);
    let gen = Generator::new(&g, &cfg).unwrap();
    let error = |dt: f64| {
        let mut x = start.pack();
        Propagator::new(&gen, Integrator::Rk4 { dt: Some(dt) }).advance(&mut x, 3.0);
        let got = DensityState::unpack(5, &x, 3.0);
        max_diff(&got.rho, &exact.rho).max((got.sunk - exact.sunk).abs())
    };
    let (e1, e2, e3) = (error(0.1), error(0.05), error(0.025));
    for ratio in [e1 / e2, e2 / e3] {
        assert!((ratio - 16.0).abs() < 0.3 * 16.0, "ratio {ratio}");
    }
}

#[test]
fn exact_limits_agree_with_the_superoperator_exponential() {
    let g = graph(Topology::ScaleFree { n: 9, links: 2 });
    for p in [0.0, 1.0] {
        let cfg = QswConfig::new(p, 8).with_gamma(0.8);
        let times = [0.0, 1.0, 4.5, 12.0];
        let fast = evolve_at(&g, &cfg, InitialState::Site(2), &times, &EvolveSettings::fast()).unwrap();
        let start = DensityState::localized(9, 2).unwrap();
        for (&t, &e) in times.iter().zip(&fast.efficiency) {
            let exact = exact_state(&g, &cfg, &start, t);
            assert!((e - exact.sunk).abs() < 1e-10, "p={p} t={t}: {e} vs {}", exact.sunk);
        }
        let exact = exact_state(&g, &cfg, &start, 12.0);
        let pops = fast.final_state.populations();
        for (a, b) in pops.iter().zip(&exact.populations()) {
            assert!((a - b).abs() < 1e-10, "p={p}: {a} vs {b}");
        }
    }
}

#[test]
fn classical_limit_follows_the_rate_equation_with_sink() {
    for (g, sink) in [
        (graph(Topology::Star { n: 6 }), 3),
        (random_connected(7, 0.2, 5), 6),
        (graph(Topology::Dendrimer { branching: 3, generations: 2 }), 9),
    ] {
        for convention in [AmplitudeConvention::SqrtRate, AmplitudeConvention::Literal] {
            let n = g.n_nodes();
            let cfg = QswConfig {
                convention,
                ..QswConfig::new(1.0, sink)
            };
            let settings = EvolveSettings {
                samples: 5,
                record_populations: true,
                ..EvolveSettings::default()
            };
            let traj = evolve_qsw(&g, &cfg, InitialState::Site(0), 10.0, &settings).unwrap();
            let mut q0 = vec![0.0; n];
            q0[0] = 1.0;
            for (k, &t) in traj.times.iter().enumerate() {
                let oracle = classical_with_sink(&g, &cfg, &q0, t);
                let pops = &traj.populations.as_ref().unwrap()[k];
                for i in 0..n {
                    assert!((pops[i] - oracle[i]).abs() < 1e-6);
                }
                assert!((traj.efficiency[k] - oracle[n]).abs() < 1e-6);
            }
            // Coherences never build up from a diagonal start.
            let rho = &traj.final_state.rho;
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| rho[(i, j)].norm())
                .fold(0.0, f64::max);
            assert!(off < 1e-12);
        }
    }
}

#[test]
fn coherences_decay_monotonically_at_p_one() {
    let g = random_connected(6, 0.3, 31);
    let cfg = QswConfig::new(1.0, 5);
    let mut state = random_state(6, 0.0, 32);
    let gen = Generator::new(&g, &cfg).unwrap();
    let mut prop = Propagator::new(&gen, Integrator::Rk4 { dt: None });
    let off_norm = |s: &DensityState| {
        let mut total = 0.0;
        for i in 0..6 {
            for j in 0..6 {
                if i != j {
                    total += s.rho[(i, j)].norm_sqr();
                }
            }
        }
        total
    };
    let mut last = off_norm(&state);
    let mut x = state.pack();
    for _ in 0..20 {
        prop.advance(&mut x, 0.25);
        state = DensityState::unpack(6, &x, 0.0);
        let now = off_norm(&state);
        assert!(now < last);
        last = now;
    }
}

#[test]
fn closed_unitary_walk_keeps_purity_and_matches_eigen_oracle() {
    let g = random_connected(8, 0.25, 41);
    let cfg = QswConfig::new(0.0, 7).with_gamma(0.0);
    // RK4 leaks norm like (h |lambda|)^6 per step, so the default step
    // leaves ~5e-7 of purity drift here; a tenth of it is well inside 1e-8.
    let settings = EvolveSettings {
        samples: 4,
        record_populations: true,
        ..rk4(0.005)
    };
    let traj = evolve_qsw(&g, &cfg, InitialState::Site(2), 20.0, &settings).unwrap();
    let drift = (traj.final_state.purity() - 1.0).abs();
    assert!(drift < 1e-8, "purity drift {drift:e}");

    let (values, vectors) = symmetric_spectrum(g.adjacency_matrix());
    for (k, &t) in traj.times.iter().enumerate() {
        for i in 0..8 {
            // <i| e^{-iAt} |2> = sum_m v_im v_2m e^{-i lambda_m t}
            let amp: C = (0..8)
                .map(|m| C::from_polar(vectors[(i, m)] * vectors[(2, m)], -values[m] * t))
                .sum();
            let got = traj.populations.as_ref().unwrap()[k][i];
            assert!((got - amp.norm_sqr()).abs() < 1e-6);
        }
    }
}

#[test]
fn complete_graph_delivers_at_most_one_over_n_minus_one_coherently() {
    let g = graph(Topology::Complete { n: 6 });
    let cfg = QswConfig::new(0.0, 5);
    let traj = evolve_qsw(&g, &cfg, InitialState::Site(0), 300.0, &EvolveSettings::default()).unwrap();
    let e = traj.final_efficiency();
    assert!(e <= 0.2 + 0.01, "{e}");
    assert!(e > 0.19);
}

#[test]
fn coherent_efficiency_is_bounded_by_the_invariant_subspace() {
    let cases = [
        (graph(Topology::Complete { n: 7 }), 6, 0),
        (graph(Topology::Star { n: 6 }), 5, 2),
        (graph(Topology::Ring { n: 8 }), 7, 0),
        (graph(Topology::KaryTree { arity: 2, depth: 2 }), 6, 3),
        (graph(Topology::SquareLattice { rows: 3, cols: 3 }), 8, 0),
    ];
    for (g, sink, site) in cases {
        let inv = invariant_subspace(&g, sink).unwrap();
        let cfg = QswConfig::new(0.0, sink);
        let e = transfer_efficiency(&g, &cfg, InitialState::Site(site), 2000.0, &EvolveSettings::fast())
            .unwrap();
        assert!(e <= 1.0 - inv.trapped_weight(site) + 1e-3, "{e} vs {}", inv.trapped_weight(site));
    }
}

#[test]
fn trajectories_conserve_and_stay_physical() {
    for seed in 0..6u64 {
        let n = 4 + seed as usize % 3;
        let g = random_connected(n, 0.3, 50 + seed);
        let cfg = QswConfig::new(seed as f64 / 5.0, n - 1);
        let traj = evolve_qsw(&g, &cfg, InitialState::Site(0), 15.0, &rk4(0.02).with_samples(30)).unwrap();
        assert!(traj.max_drift < 1e-6);
        assert!(traj.efficiency.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        assert!(traj.efficiency.iter().all(|&e| (0.0..=1.0 + 1e-6).contains(&e)));
        let s = &traj.final_state;
        assert!(s.hermiticity_error() < 1e-10);
        assert!(s.min_eigenvalue() > -1e-8);
    }
}

#[test]
fn oversized_steps_raise_an_integrator_failure() {
    let g = graph(Topology::Complete { n: 5 });
    let cfg = QswConfig::new(0.2, 4);
    let settings = rk4(2.0).with_samples(1);
    let err = evolve_qsw(&g, &cfg, InitialState::Site(0), 40.0, &settings).unwrap_err();
    assert!(matches!(err, Error::Integrator { .. }), "{err}");
}

#[test]
fn uniform_start_equals_the_mean_over_localized_starts() {
    let g = graph(Topology::Chain { n: 8 });
    for p in [0.0, 0.3, 1.0] {
        let cfg = QswConfig::new(p, 7);
        let times = [2.0, 10.0, 40.0];
        let s = EvolveSettings::fast();
        let mixed = evolve_at(&g, &cfg, InitialState::Uniform, &times, &s).unwrap();
        let mut mean = [0.0; 3];
        for site in 0..8 {
            let e = evolve_at(&g, &cfg, InitialState::Site(site), &times, &s).unwrap();
            for (m, v) in mean.iter_mut().zip(&e.efficiency) {
                *m += v / 8.0;
            }
        }
        for (a, b) in mixed.efficiency.iter().zip(&mean) {
            assert!((a - b).abs() < 1e-12, "p={p}: {a} vs {b}");
        }
    }
}

#[test]
fn efficiency_at_time_zero_and_monotonicity() {
    let g = graph(Topology::Ring { n: 6 });
    let cfg = QswConfig::new(0.4, 3);
    let s = EvolveSettings::fast();
    assert_eq!(transfer_efficiency(&g, &cfg, InitialState::Site(0), 0.0, &s).unwrap(), 0.0);
    let mut last = 0.0;
    for t in [1.0, 2.0, 5.0, 9.0, 20.0] {
        let e = transfer_efficiency(&g, &cfg, InitialState::Site(0), t, &s).unwrap();
        assert!(e >= last);
        last = e;
    }
}

#[test]
fn classical_walk_empties_a_complete_graph() {
    let g = graph(Topology::Complete { n: 6 });
    let e = transfer_efficiency(&g, &QswConfig::new(1.0, 5), InitialState::Site(0), 100.0, &rk4(0.01))
        .unwrap();
    assert!(e >= 0.99);
}

#[test]
fn tbar_selection() {
    let s = EvolveSettings::fast();
    let g = graph(Topology::Complete { n: 6 });
    let sel = select_tbar(&g, &QswConfig::new(0.0, 5), InitialState::Site(0), &s).unwrap();
    assert!(sel.t_bar <= 60.0 && !sel.saturated);
    assert!(sel.best_efficiency >= 0.99);

    let g = graph(Topology::Chain { n: 35 });
    let sel = select_tbar(&g, &QswConfig::new(0.0, 34), InitialState::Site(0), &s).unwrap();
    assert!(sel.t_bar >= 175.0);
    assert!(sel.saturated || sel.best_efficiency >= 0.99);

    // Without a sink nothing is ever delivered.
    let g = graph(Topology::Ring { n: 4 });
    let closed = QswConfig::new(0.0, 3).with_gamma(0.0);
    let sel = select_tbar(&g, &closed, InitialState::Site(0), &s).unwrap();
    assert!(sel.saturated);
    assert_eq!(sel.t_bar, 5.0 * 4.0 * 64.0);
}

#[test]
fn classical_walk_fixed_points() {
    let g = graph(Topology::SquareLattice { rows: 3, cols: 4 });
    let stat = crw_stationary(&g).unwrap();
    let total: f64 = stat.iter().sum();
    assert!((total - 1.0).abs() < 1e-15);
    let t = transition_matrix(&g).unwrap();
    let traj = crw_evolve(&t, &stat, 10.0 * 12.0, 0.05).unwrap();
    for q in &traj.populations {
        for (a, b) in q.iter().zip(&stat) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    let ring = graph(Topology::Ring { n: 7 });
    assert!(crw_stationary(&ring).unwrap().iter().all(|&q| (q - 1.0 / 7.0).abs() < 1e-15));

    let g = random_connected(9, 0.2, 77);
    let t = transition_matrix(&g).unwrap();
    let mut q0 = vec![0.0; 9];
    q0[4] = 1.0;
    let traj = crw_evolve(&t, &q0, 90.0, 0.05).unwrap();
    for q in &traj.populations {
        assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
    for (a, b) in traj.last().iter().zip(&crw_stationary(&g).unwrap()) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn invariant_subspace_projector_is_orthogonal_to_the_sink() {
    for seed in 0..5 {
        let g = random_connected(8, 0.4, 90 + seed);
        let inv = invariant_subspace(&g, 7).unwrap();
        let p = &inv.projector;
        assert!((p * p - p).abs().max() < 1e-10);
        assert!((p - p.transpose()).abs().max() < 1e-12);
        assert!((0..8).all(|i| p[(7, i)].abs() < 1e-10));
        assert!((p.trace() - inv.dimension as f64).abs() < 1e-9);
        // Commutes with the Hamiltonian.
        let a: DMatrix<f64> = g.adjacency_matrix();
        assert!((&a * p - p * &a).abs().max() < 1e-9);
    }
}
