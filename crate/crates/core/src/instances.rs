//! Instance generators: seeded sparsified grids and the small pathological
//! families used to probe the algorithms.

use rand::distributions::{Distribution, Uniform};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{shortest_path_tree, BoundError};
use crate::network::{Edge, EdgeId, Network, NetworkError, NodeId, RootedTree};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("invalid generator parameters: {0}")]
    InvalidSpec(String),
    #[error("triplets({n}) reconstruction check failed: {what}")]
    TripletsMismatch { n: usize, what: String },
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

/// Demand interval used for the benchmark grids.
pub const BENCH_DEMANDS: (f64, f64) = (0.5, 1.5);
/// Resistance interval used for the benchmark grids.
pub const BENCH_RESISTANCES: (f64, f64) = (1.0, 10.0);

/// Parameters of a generated instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    SparsifiedGrid {
        rows: usize,
        cols: usize,
        p: f64,
        demands: (f64, f64),
        resistances: (f64, f64),
        seed: u64,
    },
    /// Root and sink joined by `paths` disjoint two-hop paths.
    ParallelPaths { paths: usize },
    /// `side`×`side` unit grid with one unit of demand at the far corner.
    GridSingleDemand { side: usize },
    /// Even cycle with unit demand opposite the root.
    CycleOpposite { nodes: usize },
    Triplets { n: usize },
    FullGridUniform { rows: usize, cols: usize },
}

impl GeneratorSpec {
    /// A sparsified grid with the benchmark demand and resistance ranges.
    pub fn sparsified_grid(rows: usize, cols: usize, p: f64, seed: u64) -> Self {
        Self::SparsifiedGrid {
            rows,
            cols,
            p,
            demands: BENCH_DEMANDS,
            resistances: BENCH_RESISTANCES,
            seed,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            Self::SparsifiedGrid { .. } => "sparsified_grid",
            Self::ParallelPaths { .. } => "parallel_paths",
            Self::GridSingleDemand { .. } => "grid_single_demand",
            Self::CycleOpposite { .. } => "cycle_opposite",
            Self::Triplets { .. } => "triplets",
            Self::FullGridUniform { .. } => "full_grid_uniform",
        }
    }

    /// Sparsification probability, zero for the fixed families.
    pub fn p(&self) -> f64 {
        match self {
            Self::SparsifiedGrid { p, .. } => *p,
            _ => 0.0,
        }
    }

    /// Grid dimensions for the grid families.
    pub fn grid_shape(&self) -> Option<(usize, usize)> {
        match *self {
            Self::SparsifiedGrid { rows, cols, .. } | Self::FullGridUniform { rows, cols } => Some((rows, cols)),
            Self::GridSingleDemand { side } => Some((side, side)),
            _ => None,
        }
    }

    /// Short unique name, used as the instance id in reports.
    pub fn label(&self) -> String {
        match self {
            Self::SparsifiedGrid { rows, cols, p, seed, .. } => format!("grid{rows}x{cols}_p{p}_s{seed}"),
            Self::ParallelPaths { paths } => format!("parallel_paths{paths}"),
            Self::GridSingleDemand { side } => format!("grid_single_demand{side}"),
            Self::CycleOpposite { nodes } => format!("cycle_opposite{nodes}"),
            Self::Triplets { n } => format!("triplets{n}"),
            Self::FullGridUniform { rows, cols } => format!("full_grid{rows}x{cols}"),
        }
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        let bad = |msg: &str| Err(InstanceError::InvalidSpec(msg.to_string()));
        match *self {
            Self::SparsifiedGrid {
                rows,
                cols,
                p,
                demands: (dmin, dmax),
                resistances: (rmin, rmax),
                ..
            } => {
                if rows == 0 || cols == 0 {
                    return bad("grid dimensions must be positive");
                }
                if !(0.0..1.0).contains(&p) {
                    return bad("p must lie in [0, 1)");
                }
                if !(dmin > 0.0 && dmin <= dmax && dmax.is_finite()) {
                    return bad("demand range needs 0 < d_min <= d_max");
                }
                if !(rmin > 0.0 && rmin <= rmax && rmax.is_finite()) {
                    return bad("resistance range needs 0 < r_min <= r_max");
                }
            }
            Self::ParallelPaths { paths: 0 } => return bad("need at least one path"),
            Self::GridSingleDemand { side } if side < 2 => return bad("grid side must be at least 2"),
            Self::CycleOpposite { nodes } if nodes < 4 || nodes % 2 == 1 => {
                return bad("cycle length must be even and at least 4")
            }
            Self::Triplets { n } if n < 3 => return bad("triplets needs n >= 3"),
            Self::FullGridUniform { rows, cols } if rows == 0 || cols == 0 => {
                return bad("grid dimensions must be positive")
            }
            _ => {}
        }
        Ok(())
    }
}

/// Builds the instance described by `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<Network, InstanceError> {
    spec.validate()?;
    match *spec {
        GeneratorSpec::SparsifiedGrid {
            rows,
            cols,
            p,
            demands,
            resistances,
            seed,
        } => sparsified_grid(rows, cols, p, demands, resistances, seed),
        GeneratorSpec::ParallelPaths { paths } => parallel_paths(paths),
        GeneratorSpec::GridSingleDemand { side } => grid_single_demand(side),
        GeneratorSpec::CycleOpposite { nodes } => cycle_opposite(nodes),
        GeneratorSpec::Triplets { n } => Ok(triplets(n)?.network),
        GeneratorSpec::FullGridUniform { rows, cols } => full_grid_uniform(rows, cols),
    }
}

/// Grid edges in row-major order: right neighbour, then lower neighbour.
/// Node `(r, c)` is `r·cols + c`.
pub fn grid_edges(rows: usize, cols: usize) -> Vec<(NodeId, NodeId)> {
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    edges
}

/// Full grid rooted at node 0 whose edges are visited in a seeded random
/// order, each removed with probability `p` unless that disconnects it.
/// Demands and then resistances are drawn from the same stream.
pub fn sparsified_grid(
    rows: usize,
    cols: usize,
    p: f64,
    demands: (f64, f64),
    resistances: (f64, f64),
    seed: u64,
) -> Result<Network, InstanceError> {
    GeneratorSpec::SparsifiedGrid {
        rows,
        cols,
        p,
        demands,
        resistances,
        seed,
    }
    .validate()?;
    let n = rows * cols;
    let pairs = grid_edges(rows, cols);
    let full = Network::from_parts(
        n,
        pairs.iter().map(|&(u, v)| Edge::new(u, v, 1.0)).collect(),
        0,
        vec![0.0; n],
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<EdgeId> = (0..pairs.len()).collect();
    order.shuffle(&mut rng);
    let mut kept = vec![true; pairs.len()];
    for id in order {
        if rng.gen::<f64>() < p {
            kept[id] = false;
            if full.reach_from_root(|e| kept[e]).contains(&false) {
                kept[id] = true;
            }
        }
    }
    let demand = Uniform::new_inclusive(demands.0, demands.1);
    let d: Vec<f64> = (0..n).map(|_| demand.sample(&mut rng)).collect();
    let resistance = Uniform::new_inclusive(resistances.0, resistances.1);
    let edges = pairs
        .iter()
        .zip(&kept)
        .filter(|(_, &k)| k)
        .map(|(&(u, v), _)| Edge::new(u, v, resistance.sample(&mut rng)))
        .collect();
    Ok(Network::new(n, edges, 0, d)?)
}

pub fn full_grid_uniform(rows: usize, cols: usize) -> Result<Network, InstanceError> {
    GeneratorSpec::FullGridUniform { rows, cols }.validate()?;
    let edges = grid_edges(rows, cols).into_iter().map(|(u, v)| Edge::new(u, v, 1.0)).collect();
    Ok(Network::new(rows * cols, edges, 0, vec![1.0; rows * cols])?)
}

pub fn grid_single_demand(side: usize) -> Result<Network, InstanceError> {
    GeneratorSpec::GridSingleDemand { side }.validate()?;
    let n = side * side;
    let edges = grid_edges(side, side).into_iter().map(|(u, v)| Edge::new(u, v, 1.0)).collect();
    let mut d = vec![0.0; n];
    d[n - 1] = 1.0;
    Ok(Network::new(n, edges, 0, d)?)
}

/// Root 0 and sink 1 joined through the middle nodes `2..paths+2`.
pub fn parallel_paths(paths: usize) -> Result<Network, InstanceError> {
    GeneratorSpec::ParallelPaths { paths }.validate()?;
    let mut edges = Vec::with_capacity(2 * paths);
    for i in 0..paths {
        edges.push(Edge::new(0, 2 + i, 1.0));
        edges.push(Edge::new(2 + i, 1, 1.0));
    }
    let mut d = vec![0.0; paths + 2];
    d[1] = 1.0;
    Ok(Network::new(paths + 2, edges, 0, d)?)
}

pub fn cycle_opposite(nodes: usize) -> Result<Network, InstanceError> {
    GeneratorSpec::CycleOpposite { nodes }.validate()?;
    let edges = (0..nodes).map(|i| Edge::new(i, (i + 1) % nodes, 1.0)).collect();
    let mut d = vec![0.0; nodes];
    d[nodes / 2] = 1.0;
    Ok(Network::new(nodes, edges, 0, d)?)
}

/// The shortest-path-tree lower-bound family together with its two
/// reference trees.
#[derive(Debug, Clone)]
pub struct Triplets {
    pub n: usize,
    pub network: Network,
    pub shortest_path: RootedTree,
    pub shortest_path_cost: u128,
    pub alternative: RootedTree,
    pub alternative_cost: u128,
}

/// Triplet `i` (from 1) is the path `a = 3i−2`, `b = 3i−1`, `c = 3i` with
/// `a` adjacent to the root and `c` adjacent to the hub `3n+1`, which is
/// itself adjacent to the root. Unit resistances and demands.
///
/// The shortest-path tree hangs every `c` from the hub, so the hub edge
/// carries `n+1`; the alternative keeps that for the first three triplets
/// and hangs the rest as paths from the root. Both costs are checked
/// exactly before the instance is returned.
pub fn triplets(n: usize) -> Result<Triplets, InstanceError> {
    GeneratorSpec::Triplets { n }.validate()?;
    let hub = 3 * n + 1;
    let mut edges = vec![Edge::new(0, hub, 1.0)];
    for i in 1..=n {
        let (a, b, c) = (3 * i - 2, 3 * i - 1, 3 * i);
        edges.push(Edge::new(0, a, 1.0));
        edges.push(Edge::new(a, b, 1.0));
        edges.push(Edge::new(b, c, 1.0));
        edges.push(Edge::new(c, hub, 1.0));
    }
    let network = Network::new(hub + 1, edges, 0, vec![1.0; hub + 1])?;
    // Edge ids: hub edge 0, then per triplet root-a, a-b, b-c, c-hub.
    let base = |i: usize| 1 + 4 * (i - 1);
    let mut alt = vec![0];
    for i in 1..=n {
        alt.extend([base(i), base(i) + 1]);
        alt.push(if i <= 3 { base(i) + 3 } else { base(i) + 2 });
    }
    let alternative = RootedTree::from_edges(&network, &alt)?;
    let shortest_path = shortest_path_tree(&network)?;
    let mismatch = |what: String| InstanceError::TripletsMismatch { n, what };
    let shortest_path_cost =
        integer_tree_cost(&network, &shortest_path).ok_or_else(|| mismatch("non-integral data".into()))?;
    let alternative_cost =
        integer_tree_cost(&network, &alternative).ok_or_else(|| mismatch("non-integral data".into()))?;
    let n128 = n as u128;
    if shortest_path_cost != n128 * n128 + 8 * n128 + 1 {
        return Err(mismatch(format!("shortest-path tree costs {shortest_path_cost}")));
    }
    if alternative_cost != 14 * n128 - 8 {
        return Err(mismatch(format!("alternative tree costs {alternative_cost}")));
    }
    Ok(Triplets {
        n,
        network,
        shortest_path,
        shortest_path_cost,
        alternative,
        alternative_cost,
    })
}

/// Tree energy in exact integer arithmetic, or `None` when some resistance
/// or demand is not a nonnegative integer.
pub fn integer_tree_cost(net: &Network, tree: &RootedTree) -> Option<u128> {
    let as_int = |x: f64| (x >= 0.0 && x.fract() == 0.0 && x < 1e15).then_some(x as u128);
    let mut sub: Vec<u128> = (0..net.node_count())
        .map(|v| if v == net.root() { Some(0) } else { as_int(net.demand(v)) })
        .collect::<Option<_>>()?;
    let mut cost = 0u128;
    for &v in tree.order().iter().rev() {
        if let (Some(p), Some(e)) = (tree.parent(v), tree.parent_edge(v)) {
            cost += as_int(net.edge(e).resistance)? * sub[v] * sub[v];
            sub[p] += sub[v];
        }
    }
    Some(cost)
}
