//! Lower bounds on the optimal tree energy, and trees built from them.
//!
//! * [`flow_relaxation_bound`]: energy of the electrical flow on the whole graph.
//! * [`cut_lower_bound`]: for a family of root-containing cuts where every
//!   edge lies in at most `M` boundaries, each cut forces its far-side demand
//!   `S` across at most `|δ(S)|` edges, so any tree pays at least
//!   `(1/M) Σ r_min S² / |δ(S)|`.
//! * [`grid_diagonal_bound`]: the same argument on a grid with diagonal
//!   (Manhattan-layer) cuts, with the sharper count of usable crossing edges.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet, VecDeque};

use num_rational::Ratio;
use num_traits::CheckedAdd;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laplacian::{grounded_flow_energy, LaplacianError};
use crate::network::{EdgeId, Network, NetworkError, NodeId, RootedTree};

#[derive(Debug, Error)]
pub enum BoundError {
    #[error(transparent)]
    Laplacian(#[from] LaplacianError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("cut {0} does not contain the root")]
    RootNotInCut(usize),
    #[error("cut {cut} lists node {node}, which is out of range")]
    NodeOutOfRange { cut: usize, node: NodeId },
    #[error("cut {0} has an empty boundary, so the graph would be disconnected")]
    EmptyBoundary(usize),
    #[error("not a full grid: {0}")]
    NotAGrid(String),
    #[error("the root must sit at a grid corner")]
    RootNotAtCorner,
    #[error("grid bound needs uniform resistances")]
    NonUniformResistance,
    #[error("no arborescence crosses every cut outward; node {0} is unreachable")]
    NoArborescence(NodeId),
}

/// Energy of the unconstrained electrical flow, a lower bound for every tree.
pub fn flow_relaxation_bound(net: &Network) -> Result<f64, BoundError> {
    Ok(grounded_flow_energy(net)?)
}

/// Shortest-path tree from the root with resistances as lengths.
///
/// Among equally short paths the parent edge with the smallest index wins.
pub fn shortest_path_tree(net: &Network) -> Result<RootedTree, BoundError> {
    #[derive(PartialEq)]
    struct Item(f64, NodeId);
    impl Eq for Item {}
    impl Ord for Item {
        fn cmp(&self, other: &Self) -> Ordering {
            other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
        }
    }
    impl PartialOrd for Item {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }

    let n = net.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut parent: Vec<Option<EdgeId>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[net.root()] = 0.0;
    heap.push(Item(0.0, net.root()));
    while let Some(Item(d, x)) = heap.pop() {
        if done[x] {
            continue;
        }
        done[x] = true;
        for &id in net.incident(x) {
            let e = net.edge(id);
            let y = e.other(x);
            if done[y] {
                continue;
            }
            let nd = d + e.resistance;
            let tie = (nd - dist[y]).abs() <= 1e-12 * nd.max(1.0);
            if (nd < dist[y] && !tie) || (tie && parent[y].is_some_and(|p| id < p)) {
                dist[y] = nd.min(dist[y]);
                parent[y] = Some(id);
                heap.push(Item(dist[y], y));
            }
        }
    }
    Ok(RootedTree::from_parent_edges(net, &parent)?)
}

/// Root-containing vertex sets with their boundaries and edge multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutFamily {
    /// Sorted vertex sets, each containing the root.
    pub cuts: Vec<Vec<NodeId>>,
    /// Edges with exactly one endpoint in the matching cut.
    pub boundaries: Vec<Vec<EdgeId>>,
    /// Largest number of boundaries any edge belongs to.
    pub multiplicity: usize,
}

impl CutFamily {
    pub fn new(net: &Network, cuts: Vec<Vec<NodeId>>) -> Result<Self, BoundError> {
        let n = net.node_count();
        let mut sorted = Vec::with_capacity(cuts.len());
        let mut boundaries = Vec::with_capacity(cuts.len());
        let mut count = vec![0usize; net.edge_count()];
        for (i, mut cut) in cuts.into_iter().enumerate() {
            cut.sort_unstable();
            cut.dedup();
            if let Some(&node) = cut.iter().find(|&&x| x >= n) {
                return Err(BoundError::NodeOutOfRange { cut: i, node });
            }
            let mut inside = vec![false; n];
            cut.iter().for_each(|&x| inside[x] = true);
            if !inside[net.root()] {
                return Err(BoundError::RootNotInCut(i));
            }
            let boundary: Vec<EdgeId> = net
                .edges()
                .iter()
                .enumerate()
                .filter(|(_, e)| inside[e.u] != inside[e.v])
                .map(|(id, _)| id)
                .collect();
            boundary.iter().for_each(|&id| count[id] += 1);
            sorted.push(cut);
            boundaries.push(boundary);
        }
        Ok(Self {
            cuts: sorted,
            boundaries,
            multiplicity: count.into_iter().max().unwrap_or(0),
        })
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn contains(&self, cut: usize, node: NodeId) -> bool {
        self.cuts[cut].binary_search(&node).is_ok()
    }

    /// Total demand outside cut `i`.
    pub fn far_demand(&self, net: &Network, cut: usize) -> f64 {
        (0..net.node_count())
            .filter(|&v| v != net.root() && !self.contains(cut, v))
            .map(|v| net.demand(v))
            .sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cut family serialization cannot fail")
    }
}

/// `(1/M) Σ_i r_min(δ_i) · S_i² / |δ_i|` with `S_i` the demand outside cut `i`.
pub fn cut_lower_bound(net: &Network, cuts: &CutFamily) -> Result<f64, BoundError> {
    if cuts.is_empty() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for (i, boundary) in cuts.boundaries.iter().enumerate() {
        if boundary.is_empty() {
            return Err(BoundError::EmptyBoundary(i));
        }
        let r_min = boundary
            .iter()
            .map(|&id| net.edge(id).resistance)
            .fold(f64::INFINITY, f64::min);
        let s = cuts.far_demand(net, i);
        total += r_min * s * s / boundary.len() as f64;
    }
    Ok(total / cuts.multiplicity as f64)
}

/// Energy a tree spends on each cut's boundary edges.
pub fn tree_cut_energies(net: &Network, tree: &RootedTree, cuts: &CutFamily) -> Vec<f64> {
    let sub = tree.subtree_demands(net);
    let mut on_edge = vec![0.0; net.edge_count()];
    for v in 0..net.node_count() {
        if let Some(id) = tree.parent_edge(v) {
            on_edge[id] = net.edge(id).resistance * sub[v] * sub[v];
        }
    }
    cuts.boundaries
        .iter()
        .map(|b| b.iter().map(|&id| on_edge[id]).sum())
        .collect()
}

/// A full `rows × cols` grid with node `r·cols + c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridShape {
    pub rows: usize,
    pub cols: usize,
}

impl GridShape {
    pub fn node(&self, r: usize, c: usize) -> NodeId {
        r * self.cols + c
    }

    pub fn coords(&self, v: NodeId) -> (usize, usize) {
        (v / self.cols, v % self.cols)
    }

    /// Manhattan distance from `corner`.
    pub fn layer(&self, corner: NodeId, v: NodeId) -> usize {
        let (r0, c0) = self.coords(corner);
        let (r, c) = self.coords(v);
        r.abs_diff(r0) + c.abs_diff(c0)
    }

    pub fn is_corner(&self, v: NodeId) -> bool {
        let (r, c) = self.coords(v);
        (r == 0 || r + 1 == self.rows) && (c == 0 || c + 1 == self.cols)
    }

    /// Checks that `net` has exactly the grid's edges, each once.
    pub fn check(&self, net: &Network) -> Result<(), BoundError> {
        let (rows, cols) = (self.rows, self.cols);
        if rows == 0 || cols == 0 || net.node_count() != rows * cols {
            return Err(BoundError::NotAGrid(format!(
                "{} nodes for a {rows}x{cols} grid",
                net.node_count()
            )));
        }
        let expected = rows * (cols - 1) + cols * (rows - 1);
        if net.edge_count() != expected {
            return Err(BoundError::NotAGrid(format!(
                "{} edges, expected {expected}",
                net.edge_count()
            )));
        }
        let mut seen = HashSet::new();
        for e in net.edges() {
            let (a, b) = (self.coords(e.tail()), self.coords(e.head()));
            let adjacent = a.0.abs_diff(b.0) + a.1.abs_diff(b.1) == 1;
            if !adjacent || !seen.insert((e.tail(), e.head())) {
                return Err(BoundError::NotAGrid(format!(
                    "edge ({}, {}) is not a distinct grid edge",
                    e.u, e.v
                )));
            }
        }
        Ok(())
    }
}

/// Result of [`grid_diagonal_bound`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridDiagonalBound {
    pub value: f64,
    /// Cut `k` (index `k − 1`) separates layers `< k` from layers `≥ k`.
    pub terms: Vec<f64>,
    pub far_demands: Vec<f64>,
    /// Number of crossing edges that can carry flow outward.
    pub denominators: Vec<usize>,
    pub resistance: f64,
    pub cuts: CutFamily,
}

impl GridDiagonalBound {
    /// The bound as an exact fraction, when demands and the resistance are
    /// integers and the arithmetic fits in `i128`.
    pub fn exact_value(&self) -> Option<Ratio<i128>> {
        let as_int = |x: f64| (x.fract() == 0.0 && x.abs() < 1e15).then_some(x as i128);
        let r = as_int(self.resistance)?;
        let mut total = Ratio::from_integer(0i128);
        for (&s, &den) in self.far_demands.iter().zip(&self.denominators) {
            let s = as_int(s)?;
            let num = s.checked_mul(s)?.checked_mul(r)?;
            total = total.checked_add(&Ratio::new(num, den as i128))?;
        }
        Some(total)
    }
}

/// Diagonal-cut lower bound on a full grid with uniform resistance `r` and
/// the root at a corner.
///
/// Layer `k` holds the nodes at Manhattan distance `k` from the root. For
/// the cut between layers `k − 1` and `k`, a tree edge carries demand
/// outward only from its parent to its child, and each layer-`k` node has
/// one parent, so at most `min(|layer k|, |δ_k|)` crossing edges carry the
/// far-side demand `S_k`. The cut costs at least `r S_k² / min(..)`. The
/// cuts partition the edges, so the terms add up.
pub fn grid_diagonal_bound(
    rows: usize,
    cols: usize,
    net: &Network,
) -> Result<GridDiagonalBound, BoundError> {
    let shape = GridShape { rows, cols };
    shape.check(net)?;
    if !shape.is_corner(net.root()) {
        return Err(BoundError::RootNotAtCorner);
    }
    if !net.is_uniform_resistance() {
        return Err(BoundError::NonUniformResistance);
    }
    let resistance = net.edges().first().map_or(1.0, |e| e.resistance);
    let root = net.root();
    let layer: Vec<usize> = (0..net.node_count()).map(|v| shape.layer(root, v)).collect();
    let depth = rows + cols - 2;
    let mut layer_size = vec![0usize; depth + 1];
    let mut layer_demand = vec![0.0; depth + 1];
    for v in 0..net.node_count() {
        layer_size[layer[v]] += 1;
        if v != root {
            layer_demand[layer[v]] += net.demand(v);
        }
    }
    let cut_sets: Vec<Vec<NodeId>> = (1..=depth)
        .map(|k| (0..net.node_count()).filter(|&v| layer[v] < k).collect())
        .collect();
    let cuts = CutFamily::new(net, cut_sets)?;
    let mut terms = Vec::with_capacity(depth);
    let mut far_demands = Vec::with_capacity(depth);
    let mut denominators = Vec::with_capacity(depth);
    for k in 1..=depth {
        let s: f64 = layer_demand[k..].iter().sum();
        let den = layer_size[k].min(cuts.boundaries[k - 1].len());
        terms.push(resistance * s * s / den as f64);
        far_demands.push(s);
        denominators.push(den);
    }
    Ok(GridDiagonalBound {
        value: terms.iter().sum(),
        terms,
        far_demands,
        denominators,
        resistance,
        cuts,
    })
}

/// Per edge, the orientations allowed by the cuts: bit 0 permits tail→head,
/// bit 1 permits head→tail. An edge on a boundary may only leave the cut.
fn allowed_orientations(net: &Network, cuts: &CutFamily) -> Vec<u8> {
    let mut allowed = vec![0b11u8; net.edge_count()];
    for (i, boundary) in cuts.boundaries.iter().enumerate() {
        for &id in boundary {
            let e = net.edge(id);
            if cuts.contains(i, e.tail()) {
                allowed[id] &= 0b01;
            } else {
                allowed[id] &= 0b10;
            }
        }
    }
    allowed
}

fn arc_allowed(net: &Network, allowed: &[u8], id: EdgeId, from: NodeId) -> bool {
    let bit = if from == net.edge(id).tail() { 0b01 } else { 0b10 };
    allowed[id] & bit != 0
}

/// BFS tree from the root using only arcs that cross every cut outward.
pub fn laminar_tree_from_cuts(net: &Network, cuts: &CutFamily) -> Result<RootedTree, BoundError> {
    let allowed = allowed_orientations(net, cuts);
    let n = net.node_count();
    let mut parent: Vec<Option<EdgeId>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[net.root()] = true;
    let mut queue = VecDeque::from([net.root()]);
    while let Some(x) = queue.pop_front() {
        let mut incident = net.incident(x).to_vec();
        incident.sort_unstable();
        for id in incident {
            let y = net.edge(id).other(x);
            if !seen[y] && arc_allowed(net, &allowed, id, x) {
                seen[y] = true;
                parent[y] = Some(id);
                queue.push_back(y);
            }
        }
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Err(BoundError::NoArborescence(v));
    }
    Ok(RootedTree::from_parent_edges(net, &parent)?)
}

/// Whether every tree edge runs parent→child outward across each cut it is on.
pub fn respects_cut_orientation(net: &Network, tree: &RootedTree, cuts: &CutFamily) -> bool {
    let allowed = allowed_orientations(net, cuts);
    (0..net.node_count()).all(|v| match (tree.parent_edge(v), tree.parent(v)) {
        (Some(id), Some(p)) => arc_allowed(net, &allowed, id, p),
        _ => true,
    })
}

/// `Σ_{i=1}^{n−1} S_i² / (i + 1)` with `S_i = n² − i(i+1)/2`: the upper
/// triangle part of the diagonal bound on the `n × n` unit grid, summed cut
/// by cut.
pub fn upper_triangle_cut_sum(n: usize) -> f64 {
    let nf = n as f64;
    (1..n)
        .map(|i| {
            let i = i as f64;
            let s = nf * nf - i * (i + 1.0) / 2.0;
            s * s / (i + 1.0)
        })
        .sum()
}

/// Closed form of [`upper_triangle_cut_sum`]:
/// `n⁴(H_n − 1) − n³(n−1)/2 + (n−1)²n²/16 + (n−1)n(2n−1)/24`.
pub fn upper_triangle_closed_form(n: usize) -> f64 {
    let nf = n as f64;
    let harmonic: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
    nf.powi(4) * (harmonic - 1.0) - nf.powi(3) * (nf - 1.0) / 2.0
        + (nf - 1.0).powi(2) * nf * nf / 16.0
        + (nf - 1.0) * nf * (2.0 * nf - 1.0) / 24.0
}

/// `n⁴ ln(n+1) − (23/16)n⁴ + (11/24)n³ − (1/16)n² + n/24`, the logarithmic
/// lower estimate of the upper triangle bound.
pub fn upper_triangle_log_estimate(n: usize) -> f64 {
    let nf = n as f64;
    nf.powi(4) * (nf + 1.0).ln() - 23.0 / 16.0 * nf.powi(4) + 11.0 / 24.0 * nf.powi(3)
        - nf * nf / 16.0
        + nf / 24.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures::*;
    use crate::network::{tree_energy, Edge};
    use proptest::prelude::*;

    fn grid(rows: usize, cols: usize, root: NodeId) -> Network {
        let shape = GridShape { rows, cols };
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    edges.push(Edge::new(shape.node(r, c), shape.node(r, c + 1), 1.0));
                }
                if r + 1 < rows {
                    edges.push(Edge::new(shape.node(r, c), shape.node(r + 1, c), 1.0));
                }
            }
        }
        Network::new(rows * cols, edges, root, vec![1.0; rows * cols]).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * b.abs().max(1.0)
    }

    #[test]
    fn relaxation_on_a_tree_is_the_tree_energy() {
        let net = path3(1.0, 2.0);
        assert!(close(flow_relaxation_bound(&net).unwrap(), 13.0));
    }

    #[test]
    fn relaxation_on_opposite_cycle() {
        let edges = (0..8).map(|i| Edge::new(i, (i + 1) % 8, 1.0)).collect();
        let mut d = vec![0.0; 8];
        d[4] = 1.0;
        let net = Network::new(8, edges, 0, d).unwrap();
        assert!(close(flow_relaxation_bound(&net).unwrap(), 2.0));
    }

    #[test]
    fn spt_is_bfs_with_unit_weights() {
        let net = four_cycle();
        let t = shortest_path_tree(&net).unwrap();
        // Node 2 is two hops either way; edge (1,2) has the smaller index.
        assert_eq!(t.edges(), &[0, 1, 3]);
    }

    #[test]
    fn spt_follows_resistance() {
        let net = Network::new(
            3,
            vec![Edge::new(0, 2, 5.0), Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0)],
            0,
            vec![0.0, 1.0, 1.0],
        )
        .unwrap();
        assert_eq!(shortest_path_tree(&net).unwrap().edges(), &[1, 2]);
    }

    #[test]
    fn single_bridge_cut() {
        let net = Network::new(2, vec![Edge::new(0, 1, 3.0)], 0, vec![0.0, 2.0]).unwrap();
        let cuts = CutFamily::new(&net, vec![vec![0]]).unwrap();
        assert_eq!(cuts.multiplicity, 1);
        assert!(close(cut_lower_bound(&net, &cuts).unwrap(), 12.0));
    }

    #[test]
    fn cut_errors() {
        let net = four_cycle();
        assert!(matches!(
            CutFamily::new(&net, vec![vec![1, 2]]),
            Err(BoundError::RootNotInCut(0))
        ));
        let all = CutFamily::new(&net, vec![vec![0, 1, 2, 3]]).unwrap();
        assert!(matches!(cut_lower_bound(&net, &all), Err(BoundError::EmptyBoundary(0))));
    }

    #[test]
    fn multiplicity_counts_shared_edges() {
        let net = four_cycle();
        let cuts = CutFamily::new(&net, vec![vec![0], vec![0, 1], vec![0, 3]]).unwrap();
        assert_eq!(cuts.multiplicity, 2);
        // {0}: S=3, |δ|=2 → 4.5; {0,1}: S=2, |δ|=2 → 2; {0,3}: same → 2.
        assert!(close(cut_lower_bound(&net, &cuts).unwrap(), 8.5 / 2.0));
    }

    #[test]
    fn grid_4x4_bound() {
        let net = grid(4, 4, 0);
        let b = grid_diagonal_bound(4, 4, &net).unwrap();
        assert_eq!(b.far_demands, vec![15.0, 13.0, 10.0, 6.0, 3.0, 1.0]);
        assert_eq!(b.denominators, vec![2, 3, 4, 3, 2, 1]);
        assert!(close(b.value, 634.0 / 3.0));
        assert_eq!(b.exact_value(), Some(Ratio::new(634, 3)));
        assert_eq!(b.cuts.multiplicity, 1);
        let covered: usize = b.cuts.boundaries.iter().map(Vec::len).sum();
        assert_eq!(covered, net.edge_count());
        // The generic cut formula divides by the whole boundary 2,4,6,6,4,2.
        let generic = 225.0 / 2.0 + 169.0 / 4.0 + 100.0 / 6.0 + 36.0 / 6.0 + 9.0 / 4.0 + 0.5;
        assert!(close(cut_lower_bound(&net, &b.cuts).unwrap(), generic));
    }

    #[test]
    fn grid_lower_terms_match_closed_form() {
        for n in 2..9 {
            let b = grid_diagonal_bound(n, n, &grid(n, n, 0)).unwrap();
            for i in 1..n {
                let term = b.terms[2 * n - 2 - i];
                let fi = i as f64;
                assert!(close(term, fi * (fi + 1.0).powi(2) / 4.0));
            }
            let upper: f64 = b.terms[..n - 1].iter().sum();
            assert!(close(upper, upper_triangle_cut_sum(n)));
        }
    }

    #[test]
    fn grid_bound_is_corner_symmetric() {
        let base = grid_diagonal_bound(3, 5, &grid(3, 5, 0)).unwrap().value;
        for corner in [4, 10, 14] {
            let b = grid_diagonal_bound(3, 5, &grid(3, 5, corner)).unwrap();
            assert!(close(b.value, base));
        }
        assert!(matches!(
            grid_diagonal_bound(3, 5, &grid(3, 5, 2)),
            Err(BoundError::RootNotAtCorner)
        ));
        assert!(matches!(
            grid_diagonal_bound(5, 3, &grid(3, 5, 0)),
            Err(BoundError::NotAGrid(_))
        ));
    }

    #[test]
    fn closed_form_matches_cut_sum() {
        for n in 2..=64 {
            let a = upper_triangle_cut_sum(n);
            let b = upper_triangle_closed_form(n);
            assert!(close(a, b), "n={n}: {a} vs {b}");
            assert!(upper_triangle_log_estimate(n) <= b);
        }
    }

    #[test]
    fn laminar_tree_on_grid_is_monotone() {
        let net = grid(4, 5, 0);
        let b = grid_diagonal_bound(4, 5, &net).unwrap();
        let t = laminar_tree_from_cuts(&net, &b.cuts).unwrap();
        assert!(respects_cut_orientation(&net, &t, &b.cuts));
        let shape = GridShape { rows: 4, cols: 5 };
        for v in 1..net.node_count() {
            let p = t.parent(v).unwrap();
            assert_eq!(shape.layer(0, p) + 1, shape.layer(0, v));
        }
        // The "rows" tree: down the first column, then right along each row.
        let rows_tree: Vec<EdgeId> = (0..net.edge_count())
            .filter(|&id| {
                let e = net.edge(id);
                let (a, b) = (shape.coords(e.tail()), shape.coords(e.head()));
                a.0 == b.0 || a.1 == 0
            })
            .collect();
        let rows_tree = RootedTree::from_edges(&net, &rows_tree).unwrap();
        assert!(respects_cut_orientation(&net, &rows_tree, &b.cuts));
        let n = net.node_count() as f64;
        assert!(tree_energy(&net, &t).unwrap() <= 2.0 * n.sqrt() * b.value);
        assert!(tree_energy(&net, &rows_tree).unwrap() <= 2.0 * n.sqrt() * b.value);
    }

    #[test]
    fn laminar_tree_on_star_with_singleton_cuts() {
        let net = Network::new(
            4,
            unit_edges(&[(0, 1), (0, 2), (0, 3), (1, 2)]),
            0,
            vec![0.0, 1.0, 1.0, 1.0],
        )
        .unwrap();
        let cuts = CutFamily::new(&net, vec![vec![0]]).unwrap();
        let t = laminar_tree_from_cuts(&net, &cuts).unwrap();
        assert_eq!(t.edges(), &[0, 1, 2]);
    }

    #[test]
    fn impossible_orientation_is_reported() {
        // On the path 0-1-2, cut {0,1} needs (1,2) to run 1→2 while cut
        // {0,2} needs it to run 2→1, so node 2 cannot be reached.
        let net = Network::new(
            3,
            unit_edges(&[(0, 1), (1, 2)]),
            0,
            vec![0.0, 1.0, 1.0],
        )
        .unwrap();
        let cuts = CutFamily::new(&net, vec![vec![0, 1], vec![0, 2]]).unwrap();
        assert!(matches!(
            laminar_tree_from_cuts(&net, &cuts),
            Err(BoundError::NoArborescence(_))
        ));
    }

    #[test]
    fn cut_family_json_lists_vertex_sets() {
        let net = four_cycle();
        let cuts = CutFamily::new(&net, vec![vec![1, 0]]).unwrap();
        let json = cuts.to_json();
        let back: CutFamily = serde_json::from_str(&json).unwrap();
        assert_eq!(back.cuts, vec![vec![0, 1]]);
    }

    proptest! {
        #[test]
        fn bounds_never_exceed_the_spt(
            rows in 2usize..5, cols in 2usize..5,
            demands in proptest::collection::vec(0.0f64..3.0, 16),
        ) {
            let base = grid(rows, cols, 0);
            let net = base.with_demands(demands[..rows * cols].to_vec()).unwrap();
            let b = grid_diagonal_bound(rows, cols, &net).unwrap();
            let spt = tree_energy(&net, &shortest_path_tree(&net).unwrap()).unwrap();
            let lam = tree_energy(&net, &laminar_tree_from_cuts(&net, &b.cuts).unwrap()).unwrap();
            prop_assert!(b.value <= spt * (1.0 + 1e-9) + 1e-12);
            prop_assert!(b.value <= lam * (1.0 + 1e-9) + 1e-12);
            prop_assert!(flow_relaxation_bound(&net).unwrap() <= spt * (1.0 + 1e-9) + 1e-12);
            prop_assert!(cut_lower_bound(&net, &b.cuts).unwrap() <= b.value * (1.0 + 1e-12) + 1e-12);
        }
    }
}
