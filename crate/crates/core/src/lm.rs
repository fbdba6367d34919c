//! Layered-Matching (LM) heuristic.
//!
//! Nodes are split into BFS layers by hop distance from the root. Working
//! from the deepest layer up, every node of layer `k` picks one neighbour in
//! layer `k − 1` as its parent, choosing the edge whose relaxed (electrical)
//! flow is closest to the demand the child must draw. Each parent is then
//! contracted with its chosen children, taking their combined demand, and
//! the next layer up is matched against the contracted graph.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::laplacian::{grounded_electrical_flow, LaplacianError};
use crate::network::{Edge, EdgeId, Network, NetworkError, NodeId, RootedTree};

#[derive(Debug, Error)]
pub enum LmError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Laplacian(#[from] LaplacianError),
    #[error("node {0} has no neighbour in the layer above")]
    IsolatedChild(NodeId),
    #[error("node {0} is not reachable from the root")]
    Unreachable(NodeId),
}

/// Hop-distance layers from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerPartition {
    pub layers: Vec<Vec<NodeId>>,
    pub layer_of: Vec<usize>,
    /// `cross[k]` holds the edges between layers `k − 1` and `k` (empty for `k = 0`).
    pub cross: Vec<Vec<EdgeId>>,
}

impl LayerPartition {
    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }
}

pub fn bfs_layers(net: &Network) -> Result<LayerPartition, LmError> {
    let n = net.node_count();
    let mut dist = vec![usize::MAX; n];
    dist[net.root()] = 0;
    let mut queue = VecDeque::from([net.root()]);
    while let Some(x) = queue.pop_front() {
        for &id in net.incident(x) {
            let y = net.edge(id).other(x);
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    if let Some(v) = dist.iter().position(|&d| d == usize::MAX) {
        return Err(LmError::Unreachable(v));
    }
    let depth = dist.iter().copied().max().unwrap_or(0);
    let mut layers = vec![Vec::new(); depth + 1];
    for (v, &d) in dist.iter().enumerate() {
        layers[d].push(v);
    }
    let mut cross = vec![Vec::new(); depth + 1];
    for (id, e) in net.edges().iter().enumerate() {
        let (a, b) = (dist[e.u], dist[e.v]);
        if a != b {
            cross[a.max(b)].push(id);
        }
    }
    Ok(LayerPartition {
        layers,
        layer_of: dist,
        cross,
    })
}

/// A candidate parent link for one child.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossEdge {
    pub edge: EdgeId,
    pub parent: NodeId,
    pub child: NodeId,
    /// Relaxed flow on the edge, positive when it runs parent → child.
    pub relaxed_flow: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchingResult {
    /// For each child (in input order), the index of its chosen candidate.
    pub choice: Vec<usize>,
    /// Largest `|d_j − f^r_ij|` over the chosen links.
    pub epsilon: f64,
}

/// Minimizes the largest deviation `|d_j − f^r_ij|` over the chosen links.
///
/// Each child's constraint involves only its own links, so the optimum picks,
/// for every child separately, the link with the smallest deviation (ties to
/// the smaller parent, then the smaller edge index).
pub fn layer_matching(
    children: &[NodeId],
    child_demands: &[f64],
    candidates: &[CrossEdge],
) -> Result<MatchingResult, LmError> {
    let mut best: Vec<Option<(f64, usize)>> = vec![None; children.len()];
    let slot = |c: NodeId| children.iter().position(|&x| x == c);
    for (idx, cand) in candidates.iter().enumerate() {
        let Some(j) = slot(cand.child) else { continue };
        let dev = (child_demands[j] - cand.relaxed_flow).abs();
        let better = match best[j] {
            None => true,
            Some((d, cur)) => {
                let other = &candidates[cur];
                dev < d || (dev == d && (cand.parent, cand.edge) < (other.parent, other.edge))
            }
        };
        if better {
            best[j] = Some((dev, idx));
        }
    }
    let mut choice = Vec::with_capacity(children.len());
    let mut epsilon = 0.0f64;
    for (j, b) in best.into_iter().enumerate() {
        let (dev, idx) = b.ok_or(LmError::IsolatedChild(children[j]))?;
        epsilon = epsilon.max(dev);
        choice.push(idx);
    }
    Ok(MatchingResult { choice, epsilon })
}

/// How the relaxed flow is obtained for each layer.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Relaxation {
    /// Recompute on the contracted multigraph before every layer.
    #[default]
    PerLayer,
    /// Compute once on the original graph.
    Static,
}

/// Inputs and outcome of one layer's matching.
#[derive(Debug, Clone, Serialize)]
pub struct LayerReport {
    pub layer: usize,
    pub children: Vec<NodeId>,
    /// Combined demand of each child's contracted subtree.
    pub child_demands: Vec<f64>,
    pub candidates: Vec<CrossEdge>,
    pub matching: MatchingResult,
}

#[derive(Debug, Clone)]
pub struct LmOutcome {
    pub tree: RootedTree,
    pub layers: Vec<LayerReport>,
}

pub fn lm_heuristic(net: &Network) -> Result<RootedTree, LmError> {
    Ok(lm_heuristic_with(net, Relaxation::PerLayer)?.tree)
}

pub fn lm_heuristic_with(net: &Network, relaxation: Relaxation) -> Result<LmOutcome, LmError> {
    let part = bfs_layers(net)?;
    let n = net.node_count();
    // Original node → current representative (a node of the shallowest
    // layer processed so far, or itself).
    let mut rep: Vec<NodeId> = (0..n).collect();
    let mut demand: Vec<f64> = (0..n).map(|v| if v == net.root() { 0.0 } else { net.demand(v) }).collect();
    let mut parent: Vec<Option<EdgeId>> = vec![None; n];
    let static_flow = match relaxation {
        Relaxation::Static => Some(grounded_electrical_flow(net)?.flow),
        Relaxation::PerLayer => None,
    };
    let mut reports = Vec::with_capacity(part.depth());
    for k in (1..=part.depth()).rev() {
        let flow = match &static_flow {
            Some(f) => f.clone(),
            None => contracted_flow(net, &part, k, &rep, &demand)?,
        };
        let children = part.layers[k].clone();
        let child_demands: Vec<f64> = children.iter().map(|&c| demand[c]).collect();
        let candidates: Vec<CrossEdge> = part.cross[k]
            .iter()
            .map(|&id| {
                let e = net.edge(id);
                let (p, c) = if part.layer_of[e.u] == k { (e.v, e.u) } else { (e.u, e.v) };
                // Stored flow runs tail → head.
                let f = if c == e.head() { flow[id] } else { -flow[id] };
                CrossEdge {
                    edge: id,
                    parent: p,
                    child: c,
                    relaxed_flow: f,
                }
            })
            .collect();
        let matching = layer_matching(&children, &child_demands, &candidates)?;
        for (j, &idx) in matching.choice.iter().enumerate() {
            let cand = candidates[idx];
            parent[children[j]] = Some(cand.edge);
            demand[cand.parent] += child_demands[j];
        }
        let mut moved_to = vec![usize::MAX; n];
        for (j, &idx) in matching.choice.iter().enumerate() {
            moved_to[children[j]] = candidates[idx].parent;
        }
        for r in rep.iter_mut() {
            if part.layer_of[*r] == k {
                *r = moved_to[*r];
            }
        }
        reports.push(LayerReport {
            layer: k,
            children,
            child_demands,
            candidates,
            matching,
        });
    }
    let tree = RootedTree::from_parent_edges(net, &parent)?;
    Ok(LmOutcome { tree, layers: reports })
}

/// Relaxed flow on every original edge, computed on the graph where layers
/// deeper than `k` are already contracted into their layer-`k` ancestors.
/// Edges inside a contracted group get zero; parallel edges are kept.
fn contracted_flow(
    net: &Network,
    part: &LayerPartition,
    k: usize,
    rep: &[NodeId],
    demand: &[f64],
) -> Result<Vec<f64>, LmError> {
    let mut index = vec![usize::MAX; net.node_count()];
    let mut count = 0;
    for layer in &part.layers[..=k] {
        for &v in layer {
            index[v] = count;
            count += 1;
        }
    }
    let mut edges = Vec::with_capacity(net.edge_count());
    let mut origin = Vec::with_capacity(net.edge_count());
    for (id, e) in net.edges().iter().enumerate() {
        let (a, b) = (index[rep[e.u]], index[rep[e.v]]);
        if a != b {
            edges.push(Edge::new(a, b, e.resistance));
            origin.push(id);
        }
    }
    let mut demands = vec![0.0; count];
    for layer in &part.layers[..=k] {
        for &v in layer {
            demands[index[v]] = demand[v];
        }
    }
    let contracted = Network::from_parts(count, edges, index[net.root()], demands);
    let sol = grounded_electrical_flow(&contracted)?;
    let mut flow = vec![0.0; net.edge_count()];
    for (local, &id) in origin.iter().enumerate() {
        let e = net.edge(id);
        let ce = contracted.edge(local);
        // Contraction may flip the tail/head order of an edge.
        let same = index[rep[e.tail()]] == ce.tail();
        flow[id] = if same { sol.flow[local] } else { -sol.flow[local] };
    }
    Ok(flow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::flow_relaxation_bound;
    use crate::network::fixtures::*;
    use crate::network::{is_spanning_tree, tree_energy};
    use proptest::prelude::*;

    /// Best max-deviation over every assignment, by enumeration.
    fn exhaustive_epsilon(children: &[NodeId], demands: &[f64], cands: &[CrossEdge]) -> f64 {
        let options: Vec<Vec<f64>> = children
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                cands
                    .iter()
                    .filter(|e| e.child == c)
                    .map(|e| (demands[j] - e.relaxed_flow).abs())
                    .collect()
            })
            .collect();
        fn walk(options: &[Vec<f64>], worst: f64) -> f64 {
            match options.split_first() {
                None => worst,
                Some((first, rest)) => first
                    .iter()
                    .map(|&d| walk(rest, worst.max(d)))
                    .fold(f64::INFINITY, f64::min),
            }
        }
        walk(&options, 0.0)
    }

    fn grid(rows: usize, cols: usize) -> Network {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push(Edge::new(v, v + 1, 1.0));
                }
                if r + 1 < rows {
                    edges.push(Edge::new(v, v + cols, 1.0));
                }
            }
        }
        Network::new(rows * cols, edges, 0, vec![1.0; rows * cols]).unwrap()
    }

    #[test]
    fn layers_of_simple_graphs() {
        let path = Network::new(4, unit_edges(&[(0, 1), (1, 2), (2, 3)]), 0, vec![1.0; 4]).unwrap();
        let sizes: Vec<usize> = bfs_layers(&path).unwrap().layers.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 1, 1, 1]);
        let star = Network::new(5, unit_edges(&[(0, 1), (0, 2), (0, 3), (0, 4)]), 0, vec![1.0; 5]).unwrap();
        let sizes: Vec<usize> = bfs_layers(&star).unwrap().layers.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 4]);
        let sizes: Vec<usize> = bfs_layers(&grid(3, 3)).unwrap().layers.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 2, 3, 2, 1]);
    }

    #[test]
    fn two_by_two_matching_example() {
        let (a, b, u, v) = (0, 1, 2, 3);
        let cands = [
            CrossEdge { edge: 0, parent: a, child: u, relaxed_flow: 1.0 },
            CrossEdge { edge: 1, parent: a, child: v, relaxed_flow: 0.4 },
            CrossEdge { edge: 2, parent: b, child: v, relaxed_flow: 0.6 },
        ];
        let m = layer_matching(&[u, v], &[1.0, 1.0], &cands).unwrap();
        assert_eq!(m.choice, vec![0, 2]);
        assert!((m.epsilon - 0.4).abs() < 1e-15);
        assert_eq!(m.epsilon, exhaustive_epsilon(&[u, v], &[1.0, 1.0], &cands));
    }

    #[test]
    fn forced_and_exact_matchings() {
        let cands = [CrossEdge { edge: 0, parent: 0, child: 1, relaxed_flow: 0.25 }];
        let m = layer_matching(&[1], &[1.0], &cands).unwrap();
        assert_eq!(m.epsilon, 0.75);
        let cands = [
            CrossEdge { edge: 0, parent: 0, child: 1, relaxed_flow: 0.25 },
            CrossEdge { edge: 1, parent: 2, child: 1, relaxed_flow: 1.0 },
        ];
        assert_eq!(layer_matching(&[1], &[1.0], &cands).unwrap().epsilon, 0.0);
        assert!(matches!(layer_matching(&[5], &[1.0], &cands), Err(LmError::IsolatedChild(5))));
    }

    #[test]
    fn ties_go_to_the_smaller_parent() {
        let cands = [
            CrossEdge { edge: 0, parent: 4, child: 1, relaxed_flow: 0.5 },
            CrossEdge { edge: 1, parent: 2, child: 1, relaxed_flow: 1.5 },
        ];
        assert_eq!(layer_matching(&[1], &[1.0], &cands).unwrap().choice, vec![1]);
    }

    #[test]
    fn tree_input_is_returned() {
        let net = path3(1.0, 2.0);
        assert_eq!(lm_heuristic(&net).unwrap().edges(), &[0, 1]);
    }

    #[test]
    fn three_by_three_grid() {
        let net = grid(3, 3);
        let tree = lm_heuristic(&net).unwrap();
        assert_eq!(tree.edges().len(), 8);
        let e = tree_energy(&net, &tree).unwrap();
        assert!(e >= flow_relaxation_bound(&net).unwrap());
        // The best of the 192 spanning trees of the 3x3 unit grid costs 52.
        assert!(e >= 52.0);
    }

    #[test]
    fn contraction_conserves_demand() {
        let net = grid(4, 4);
        let out = lm_heuristic_with(&net, Relaxation::PerLayer).unwrap();
        for report in &out.layers {
            let total: f64 = report.child_demands.iter().sum();
            let below: f64 = (0..16)
                .filter(|&v| bfs_layers(&net).unwrap().layer_of[v] >= report.layer)
                .map(|v| net.demand(v))
                .sum();
            assert!((total - below).abs() < 1e-12);
        }
    }

    #[test]
    fn relaxed_flow_into_first_layer_matches_uncontracted_solution() {
        // On the deepest layer nothing is contracted yet, so both modes agree.
        let net = grid(3, 4);
        let a = lm_heuristic_with(&net, Relaxation::PerLayer).unwrap();
        let b = lm_heuristic_with(&net, Relaxation::Static).unwrap();
        for (x, y) in a.layers[0].candidates.iter().zip(&b.layers[0].candidates) {
            assert!((x.relaxed_flow - y.relaxed_flow).abs() < 1e-10);
        }
        // Flow into the root layer equals the total demand in both modes.
        let top = a.layers.last().unwrap();
        let into_layer_one: f64 = top.candidates.iter().map(|c| c.relaxed_flow).sum();
        assert!((into_layer_one - 11.0).abs() < 1e-9);
    }

    fn random_graph() -> impl Strategy<Value = Network> {
        (3usize..10)
            .prop_flat_map(|n| {
                (
                    Just(n),
                    proptest::collection::vec(0usize..1000, n - 1),
                    proptest::collection::vec((0usize..n, 0usize..n, 0.5f64..4.0), 0..12),
                    proptest::collection::vec(0.0f64..2.0, n),
                )
            })
            .prop_map(|(n, parents, chords, demands)| {
                let mut edges: Vec<Edge> = (1..n).map(|i| Edge::new(parents[i - 1] % i, i, 1.0)).collect();
                edges.extend(chords.into_iter().filter(|(a, b, _)| a != b).map(|(a, b, r)| Edge::new(a, b, r)));
                Network::new(n, edges, 0, demands).unwrap()
            })
    }

    proptest! {
        #[test]
        fn output_is_a_layered_spanning_tree(net in random_graph(), fixed in any::<bool>()) {
            let mode = if fixed { Relaxation::Static } else { Relaxation::PerLayer };
            let out = lm_heuristic_with(&net, mode).unwrap();
            prop_assert!(is_spanning_tree(&net, out.tree.edges()));
            let part = bfs_layers(&net).unwrap();
            for v in 0..net.node_count() {
                if let Some(p) = out.tree.parent(v) {
                    prop_assert_eq!(part.layer_of[p] + 1, part.layer_of[v]);
                }
            }
            for r in &out.layers {
                let eps = exhaustive_epsilon(&r.children, &r.child_demands, &r.candidates);
                prop_assert_eq!(r.matching.epsilon, eps);
            }
            let e = tree_energy(&net, &out.tree).unwrap();
            prop_assert!(e >= flow_relaxation_bound(&net).unwrap() * (1.0 - 1e-9));
        }
    }
}
