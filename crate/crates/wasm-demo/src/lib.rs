//! Browser front end: an E(p) sweep, an E(t) trajectory and a force-directed
//! drawing for small networks. The plain functions are what the bindings
//! call; they also run natively so they can be tested.

use qsw_core::dynamics::{evolve_qsw, transfer_efficiency, EvolveSettings, InitialState, QswConfig};
use qsw_core::experiments::uniform_grid;
use qsw_core::graph::{generate_graph, Graph, Topology, TopologySpec};
use qsw_core::io::force_layout;
use wasm_bindgen::prelude::*;

/// Largest network the page will build; the density matrix has N^2 entries.
pub const MAX_NODES: usize = 100;

/// `size` is the node count, or the side for lattice-based families.
pub fn build(family: &str, size: usize, seed: u32) -> Result<Graph, String> {
    let topology = match family {
        "chain" => Topology::Chain { n: size },
        "ring" => Topology::Ring { n: size },
        "star" => Topology::Star { n: size },
        "complete" => Topology::Complete { n: size },
        "lattice" => Topology::square(size),
        "small-world" => Topology::SmallWorld {
            rows: size,
            cols: size,
            rewiring: 0.1,
        },
        "random-regular" => Topology::RandomRegular { rows: size, cols: size },
        "scale-free" => Topology::ScaleFree { n: size, links: 2 },
        other => return Err(format!("unknown family `{other}`")),
    };
    if topology.n_nodes() > MAX_NODES {
        return Err(format!("{} nodes is more than the demo handles ({MAX_NODES})", topology.n_nodes()));
    }
    generate_graph(&TopologySpec::new(topology, seed as u64)).map_err(|e| e.to_string())
}

fn config(g: &Graph, p: f64) -> QswConfig {
    QswConfig::new(p, g.n_nodes() - 1)
}

/// E(p, t_bar) from node 1 into a sink at the last node, on `points` values
/// of p spread over [0, 1].
pub fn curve(family: &str, size: usize, seed: u32, points: usize, t_bar: f64) -> Result<Vec<f64>, String> {
    let g = build(family, size, seed)?;
    uniform_grid(points.max(2))
        .into_iter()
        .map(|p| {
            transfer_efficiency(&g, &config(&g, p), InitialState::Site(0), t_bar, &EvolveSettings::fast())
                .map_err(|e| e.to_string())
        })
        .collect()
}

/// E(t) at `samples + 1` equally spaced times in [0, t_final].
pub fn trajectory(family: &str, size: usize, seed: u32, p: f64, t_final: f64, samples: usize) -> Result<Vec<f64>, String> {
    let g = build(family, size, seed)?;
    let settings = EvolveSettings::fast().with_samples(samples.max(1));
    evolve_qsw(&g, &config(&g, p), InitialState::Site(0), t_final, &settings)
        .map(|t| t.efficiency)
        .map_err(|e| e.to_string())
}

/// Node positions `[x0, y0, x1, y1, ...]` in the unit square followed by
/// the edges as `[a0, b0, a1, b1, ...]`, split at `2 N`.
pub fn layout(family: &str, size: usize, seed: u32) -> Result<(Vec<f64>, Vec<u32>), String> {
    let g = build(family, size, seed)?;
    let pos = force_layout(&g, seed as u64, 200);
    let xy = pos.iter().flat_map(|&(x, y)| [x, y]).collect();
    let edges = g.edges().iter().flat_map(|&(a, b)| [a as u32, b as u32]).collect();
    Ok((xy, edges))
}

#[wasm_bindgen(js_name = efficiencyCurve)]
pub fn efficiency_curve(family: &str, size: usize, seed: u32, points: usize, t_bar: f64) -> Result<Vec<f64>, JsError> {
    curve(family, size, seed, points, t_bar).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = efficiencyTrajectory)]
pub fn efficiency_trajectory(
    family: &str,
    size: usize,
    seed: u32,
    p: f64,
    t_final: f64,
    samples: usize,
) -> Result<Vec<f64>, JsError> {
    trajectory(family, size, seed, p, t_final, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = layoutPositions)]
pub fn layout_positions(family: &str, size: usize, seed: u32) -> Result<Vec<f64>, JsError> {
    layout(family, size, seed).map(|l| l.0).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = layoutEdges)]
pub fn layout_edges(family: &str, size: usize, seed: u32) -> Result<Vec<u32>, JsError> {
    layout(family, size, seed).map(|l| l.1).map_err(|e| JsError::new(&e))
}
