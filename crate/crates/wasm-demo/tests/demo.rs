use qsw_wasm_demo::{build, curve, layout, trajectory, MAX_NODES};

#[test]
fn families_and_limits() {
    assert_eq!(build("lattice", 5, 0).unwrap().n_nodes(), 25);
    assert_eq!(build("scale-free", 30, 2).unwrap().n_nodes(), 30);
    assert!(build("torus", 5, 0).unwrap_err().contains("torus"));
    assert!(build("chain", MAX_NODES + 1, 0).is_err());
}

#[test]
fn curve_ends_at_the_two_limits() {
    let e = curve("chain", 8, 0, 5, 80.0).unwrap();
    assert_eq!(e.len(), 5);
    assert!(e.iter().all(|&x| (0.0..=1.0).contains(&x)));
    // Same run as the first and last grid points.
    let t0 = trajectory("chain", 8, 0, 0.0, 80.0, 4).unwrap();
    let t1 = trajectory("chain", 8, 0, 1.0, 80.0, 4).unwrap();
    assert!((t0[4] - e[0]).abs() < 1e-12);
    assert!((t1[4] - e[4]).abs() < 1e-12);
}

#[test]
fn trajectory_is_monotone() {
    let e = trajectory("lattice", 4, 0, 0.1, 40.0, 20).unwrap();
    assert_eq!(e.len(), 21);
    assert_eq!(e[0], 0.0);
    assert!(e.windows(2).all(|w| w[1] >= w[0] - 1e-12));
}

#[test]
fn layout_shapes() {
    let (xy, edges) = layout("small-world", 5, 3).unwrap();
    assert_eq!(xy.len(), 50);
    assert_eq!(edges.len(), 2 * 40);
    assert_eq!((xy.clone(), edges.clone()), layout("small-world", 5, 3).unwrap());
}
