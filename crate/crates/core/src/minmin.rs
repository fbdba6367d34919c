//! Min-Min trees for full grids with uniform resistances and a corner root.
//!
//! Label the layers by Manhattan distance from the root. For an `n × m`
//! grid with `n ≤ m`, layer `n − 1` is the first layer with `n` nodes.
//! Beyond it, in the lower triangle, the tree is a set of vertex-disjoint
//! monotone paths whose lengths are a permutation of `1..=n`. Between the
//! layers `n − 1` and `m − 1` the paths run straight along the long side.
//! Above layer `n − 1`, going toward the root, every layer merges the two
//! smallest subtrees and passes everything else straight on.
//!
//! The merges are first planned on the sequence of subtree sizes
//! ([`merge_sequence`]); the planned merges are then laid out so that the
//! two subtrees of every merge sit side by side ([`uncross`]).
//!
//! Positions inside a layer are counted along the short side: in abstract
//! coordinates `(a, b)`, with `a < n` along the short side and `b < m`
//! along the long side, node `(a, b)` is in layer `a + b` at position `a`.

use std::collections::HashMap;

use thiserror::Error;

use crate::bounds::{BoundError, GridShape};
use crate::network::{EdgeId, Network, NetworkError, NodeId, RootedTree};

#[derive(Debug, Error)]
pub enum MinMinError {
    #[error("merge plans need at least two values, got {0}")]
    TooShort(usize),
    #[error("short side {short} exceeds long side {long}")]
    BadSides { short: usize, long: usize },
    #[error(transparent)]
    Grid(#[from] BoundError),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

/// One planned merge: the values at positions `left < right` of a level
/// are joined and the result takes position `left`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergeRecord {
    pub left: usize,
    pub right: usize,
    pub left_value: u64,
    pub right_value: u64,
}

/// The merge plan. `levels[k]` lists the subtree sizes crossing into layer
/// `n − 1 − k`, and `merges[k]` turns `levels[k]` into `levels[k + 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergePlan {
    pub short: usize,
    pub long: usize,
    pub levels: Vec<Vec<u64>>,
    pub merges: Vec<MergeRecord>,
}

impl MergePlan {
    pub fn initial(&self) -> &[u64] {
        &self.levels[0]
    }

    pub fn offset(&self) -> u64 {
        (self.long - self.short) as u64
    }
}

/// Picks the pair to merge: the two smallest values; among tied choices an
/// adjacent pair wins, then the leftmost pair.
fn pick_pair(seq: &[u64]) -> (usize, usize) {
    let mut sorted = seq.to_vec();
    sorted.sort_unstable();
    let (lo, hi) = (sorted[0], sorted[1]);
    let fits = |i: usize, j: usize| {
        let (x, y) = (seq[i].min(seq[j]), seq[i].max(seq[j]));
        x == lo && y == hi
    };
    if let Some(i) = (0..seq.len() - 1).find(|&i| fits(i, i + 1)) {
        return (i, i + 1);
    }
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if fits(i, j) {
                return (i, j);
            }
        }
    }
    unreachable!("the two smallest values are always a pair")
}

/// Starts from `(m−n)+1, …, (m−n)+n`; repeatedly merges the two smallest
/// values into the left one's place and adds one to everything, until two
/// values remain.
pub fn merge_sequence(short: usize, long: usize) -> Result<MergePlan, MinMinError> {
    if short < 2 {
        return Err(MinMinError::TooShort(short));
    }
    if short > long {
        return Err(MinMinError::BadSides { short, long });
    }
    let offset = (long - short) as u64;
    let mut seq: Vec<u64> = (1..=short as u64).map(|v| v + offset).collect();
    let mut levels = vec![seq.clone()];
    let mut merges = Vec::with_capacity(short - 2);
    while seq.len() > 2 {
        let (left, right) = pick_pair(&seq);
        merges.push(MergeRecord {
            left,
            right,
            left_value: seq[left],
            right_value: seq[right],
        });
        seq[left] += seq[right];
        seq.remove(right);
        seq.iter_mut().for_each(|v| *v += 1);
        levels.push(seq.clone());
    }
    Ok(MergePlan {
        short,
        long,
        levels,
        merges,
    })
}

/// Successor counts of the `n` edges entering layer `n − 1`, listed by
/// position along that layer. Holds a permutation of `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalPermutation(pub Vec<u64>);

impl DiagonalPermutation {
    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn is_permutation(&self) -> bool {
        let mut v = self.0.clone();
        v.sort_unstable();
        v.iter().enumerate().all(|(i, &x)| x == i as u64 + 1)
    }
}

/// Replays the plan on leaf blocks. Calls `visit(level, blocks, left, right)`
/// before each merge, where `blocks` lists each current block's leaves
/// (indices into the initial sequence) in plan order.
fn replay(plan: &MergePlan, mut visit: impl FnMut(usize, &[Vec<usize>], usize, usize)) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = (0..plan.short).map(|i| vec![i]).collect();
    for (k, m) in plan.merges.iter().enumerate() {
        visit(k, &blocks, m.left, m.right);
        let right = blocks.remove(m.right);
        blocks[m.left].extend(right);
    }
    blocks
}

/// Orders the diagonal by an in-order walk of the merge forest, so that
/// every planned merge joins two neighbouring blocks.
pub fn uncross(plan: &MergePlan) -> DiagonalPermutation {
    // Each block's leaves are kept in in-order: the left block's leaves come
    // before the right block's.
    let order: Vec<usize> = replay(plan, |_, _, _, _| {}).concat();
    let offset = plan.offset();
    DiagonalPermutation(order.into_iter().map(|i| plan.initial()[i] - offset).collect())
}

/// Whether laying the diagonal out as `perm` keeps every merge of `plan`
/// between neighbouring blocks.
pub fn is_valid_layout(plan: &MergePlan, perm: &DiagonalPermutation) -> bool {
    if perm.0.len() != plan.short || !perm.is_permutation() {
        return false;
    }
    let offset = plan.offset();
    let mut position = vec![0usize; plan.short];
    for (pos, &v) in perm.0.iter().enumerate() {
        position[(v - 1) as usize] = pos;
    }
    let leaf_pos = |leaf: usize| position[(plan.initial()[leaf] - offset - 1) as usize];
    let mut ok = true;
    replay(plan, |_, blocks, l, r| {
        let mut spots: Vec<usize> = blocks[l].iter().chain(&blocks[r]).map(|&x| leaf_pos(x)).collect();
        spots.sort_unstable();
        ok &= spots.windows(2).all(|w| w[1] == w[0] + 1);
    });
    ok
}

/// Disjoint paths over the lower triangle of an `n × n` grid. Path `j`
/// starts at `(j, n−1−j)` on layer `n − 1` and has `perm[j]` nodes. On each
/// layer the path of length one stops and the others move, in order, to the
/// next layer's nodes.
pub fn diagonal_paths(perm: &DiagonalPermutation) -> Vec<Vec<(usize, usize)>> {
    let n = perm.0.len();
    let mut paths: Vec<Vec<(usize, usize)>> = (0..n).map(|j| vec![(j, n - 1 - j)]).collect();
    // (path, remaining nodes) for the paths still alive, in position order.
    let mut alive: Vec<(usize, u64)> = perm.0.iter().copied().enumerate().collect();
    for t in 0..n {
        alive.retain(|&(_, v)| v > 1);
        let layer = n + t;
        for (k, (path, v)) in alive.iter_mut().enumerate() {
            let a = t + 1 + k;
            paths[*path].push((a, layer - a));
            *v -= 1;
        }
    }
    paths
}

/// Maps abstract `(a, b)` coordinates to grid nodes for a given corner root.
struct Frame {
    shape: GridShape,
    root: (usize, usize),
    short_is_rows: bool,
}

impl Frame {
    fn node(&self, a: usize, b: usize) -> NodeId {
        let (dr, dc) = if self.short_is_rows { (a, b) } else { (b, a) };
        let r = if self.root.0 == 0 { dr } else { self.root.0 - dr };
        let c = if self.root.1 == 0 { dc } else { self.root.1 - dc };
        self.shape.node(r, c)
    }
}

/// Builds the Min-Min tree of a full `rows × cols` grid. Demands are
/// ignored by the construction.
pub fn minmin(rows: usize, cols: usize, net: &Network) -> Result<RootedTree, MinMinError> {
    let shape = GridShape { rows, cols };
    shape.check(net)?;
    if !shape.is_corner(net.root()) {
        return Err(BoundError::RootNotAtCorner.into());
    }
    if !net.is_uniform_resistance() {
        return Err(BoundError::NonUniformResistance.into());
    }
    let (short, long) = (rows.min(cols), rows.max(cols));
    let frame = Frame {
        shape,
        root: shape.coords(net.root()),
        short_is_rows: rows <= cols,
    };
    // (child, parent) pairs in abstract coordinates.
    let mut links: Vec<((usize, usize), (usize, usize))> = Vec::with_capacity(rows * cols);
    if short == 1 {
        links.extend((1..long).map(|b| ((0, b), (0, b - 1))));
    } else {
        let plan = merge_sequence(short, long)?;
        let perm = uncross(&plan);
        upper_links(&plan, &perm, &mut links);
        // Straight runs along the long side.
        for d in short..long {
            links.extend((0..short).map(|a| ((a, d - a), (a, d - a - 1))));
        }
        let shift = long - short;
        for path in diagonal_paths(&perm) {
            for w in path.windows(2) {
                links.push(((w[1].0, w[1].1 + shift), (w[0].0, w[0].1 + shift)));
            }
        }
    }
    let mut lookup: HashMap<(NodeId, NodeId), EdgeId> = HashMap::with_capacity(net.edge_count());
    for (id, e) in net.edges().iter().enumerate() {
        lookup.insert((e.tail(), e.head()), id);
    }
    let mut parent = vec![None; net.node_count()];
    for (child, par) in links {
        let (x, y) = (frame.node(child.0, child.1), frame.node(par.0, par.1));
        parent[x] = Some(lookup[&(x.min(y), x.max(y))]);
    }
    Ok(RootedTree::from_parent_edges(net, &parent)?)
}

/// Upper triangle: layers `n − 1` down to `1`.
fn upper_links(
    plan: &MergePlan,
    perm: &DiagonalPermutation,
    links: &mut Vec<((usize, usize), (usize, usize))>,
) {
    let short = plan.short;
    let offset = plan.offset();
    let mut layout = vec![0usize; short];
    for (pos, &v) in perm.0.iter().enumerate() {
        layout[(v - 1) as usize] = pos;
    }
    let leaf_pos = |leaf: usize| layout[(plan.initial()[leaf] - offset - 1) as usize];
    replay(plan, |k, blocks, l, r| {
        let layer = short - 1 - k;
        let mut starts: Vec<usize> = blocks.iter().map(|b| b.iter().map(|&x| leaf_pos(x)).min().unwrap()).collect();
        let joined = starts[l].min(starts[r]);
        starts.sort_unstable();
        // Position of the merged pair's left block in this layer.
        let p = starts.binary_search(&joined).unwrap();
        for q in 0..=layer {
            let to = if q <= p { q } else { q - 1 };
            links.push(((q, layer - q), (to, layer - 1 - to)));
        }
    });
    // Layer 1 hangs off the root.
    links.push(((0, 1), (0, 0)));
    links.push(((1, 0), (0, 0)));
}

/// `(max d / min d)²` over the non-root nodes: the factor by which the
/// uniform-demand guarantee degrades when demands vary.
pub fn demand_spread_factor(net: &Network) -> f64 {
    let (lo, hi) = (0..net.node_count())
        .filter(|&v| v != net.root())
        .map(|v| net.demand(v))
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d), hi.max(d)));
    if hi == 0.0 {
        1.0
    } else {
        (hi / lo).powi(2)
    }
}
