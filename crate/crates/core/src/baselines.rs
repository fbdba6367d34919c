//! Baselines and exact oracles: randomized DFS trees, branch exchange local
//! search, spanning-tree enumeration, the matrix-tree count, and brute force.

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::network::{tree_energy, EdgeId, Network, NetworkError, NodeId, RootedTree};

/// Default refusal threshold for enumeration.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("{count} spanning trees exceed the enumeration cap of {cap}")]
    TooManyTrees { count: u128, cap: u128 },
    #[error("spanning-tree count overflows 128-bit integers (about {estimate:e})")]
    CountOverflow { estimate: f64 },
    #[error("budget needs at least one finite limit")]
    UnboundedBudget,
    #[error("budget values must be nonnegative")]
    NegativeBudget,
}

impl OracleError {
    pub fn is_resource_refusal(&self) -> bool {
        matches!(self, Self::TooManyTrees { .. } | Self::CountOverflow { .. })
    }
}

/// Depth-first spanning tree from the root. Each node's incident edges are
/// shuffled (ChaCha8, seeded) when the node is first reached.
pub fn dfs_tree(net: &Network, seed: u64) -> Result<RootedTree, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = net.node_count();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let shuffled = |x: NodeId, rng: &mut ChaCha8Rng| {
        let mut inc = net.incident(x).to_vec();
        inc.shuffle(rng);
        inc
    };
    seen[net.root()] = true;
    let mut stack = vec![(net.root(), shuffled(net.root(), &mut rng), 0usize)];
    while let Some((x, inc, next)) = stack.last_mut() {
        if *next == inc.len() {
            stack.pop();
            continue;
        }
        let id = inc[*next];
        *next += 1;
        let y = net.edge(id).other(*x);
        if !seen[y] {
            seen[y] = true;
            parent[y] = Some(id);
            let inc = shuffled(y, &mut rng);
            stack.push((y, inc, 0));
        }
    }
    Ok(RootedTree::from_parent_edges(net, &parent)?)
}

/// How branch exchange accepts moves.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ExchangeRule {
    /// Take the first improving exchange found and rescan.
    #[default]
    FirstImprovement,
    /// Accept only improvements of at least `T`; halve `T` when none is left.
    Halving,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalSearchBudget {
    pub max_iterations: Option<u64>,
    pub time_limit: Option<Duration>,
    /// Smallest energy decrease a move must achieve.
    pub improvement_threshold: f64,
    /// Stop as soon as the energy is at or below this value.
    pub target_energy: Option<f64>,
}

impl LocalSearchBudget {
    pub fn iterations(n: u64) -> Self {
        Self {
            max_iterations: Some(n),
            time_limit: None,
            improvement_threshold: 0.0,
            target_energy: None,
        }
    }

    pub fn time(limit: Duration) -> Self {
        Self {
            max_iterations: None,
            time_limit: Some(limit),
            improvement_threshold: 0.0,
            target_energy: None,
        }
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        if self.max_iterations.is_none() && self.time_limit.is_none() {
            return Err(OracleError::UnboundedBudget);
        }
        if self.improvement_threshold < 0.0 || self.improvement_threshold.is_nan() {
            return Err(OracleError::NegativeBudget);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StopReason {
    LocalOptimum,
    IterationLimit,
    TimeLimit,
    TargetReached,
}

#[derive(Debug, Clone)]
pub struct ExchangeOutcome {
    pub tree: RootedTree,
    pub energy: f64,
    pub moves: u64,
    /// `(seconds since start, energy)` at the start and after every move.
    pub history: Vec<(f64, f64)>,
    pub stop: StopReason,
}

impl ExchangeOutcome {
    /// Seconds until the energy first fell to `target` (within a relative
    /// `1e−9`), if it did.
    pub fn time_to_reach(&self, target: f64) -> Option<f64> {
        self.history
            .iter()
            .find(|&&(_, e)| e <= target * (1.0 + 1e-9))
            .map(|&(t, _)| t)
    }
}

/// Best exchange available for one non-tree edge.
struct Exchange {
    removed: EdgeId,
    delta: f64,
}

/// Evaluates every removal on the cycle closed by `added`.
///
/// With `D` the flow on the removed edge, `A`/`B` the sums of `r` and
/// `r·S` over the cycle edges on the removed edge's side (`S` the current
/// subtree demand) and `A'`/`B'` the same on the other side, the energy
/// changes by `D²(r_added + A + A') − 2D(B − B')`.
fn best_exchange(
    net: &Network,
    tree: &RootedTree,
    depth: &[usize],
    sub: &[f64],
    added: EdgeId,
) -> Option<Exchange> {
    let e = net.edge(added);
    let (mut x, mut y) = (e.u, e.v);
    let mut xs: Vec<NodeId> = Vec::new();
    let mut ys: Vec<NodeId> = Vec::new();
    while x != y {
        if depth[x] >= depth[y] {
            xs.push(x);
            x = tree.parent(x)?;
        } else {
            ys.push(y);
            y = tree.parent(y)?;
        }
    }
    let sums = |side: &[NodeId]| {
        side.iter().fold((0.0, 0.0), |(a, b), &c| {
            let r = net.edge(tree.parent_edge(c).unwrap()).resistance;
            (a + r, b + r * sub[c])
        })
    };
    let (ax, bx) = sums(&xs);
    let (ay, by) = sums(&ys);
    let quad = e.resistance + ax + ay;
    let mut best: Option<Exchange> = None;
    for (side, own, other) in [(&xs, bx, by), (&ys, by, bx)] {
        for &c in side.iter() {
            let d = sub[c];
            let delta = d * d * quad - 2.0 * d * (own - other);
            if best.as_ref().is_none_or(|b| delta < b.delta) {
                best = Some(Exchange {
                    removed: tree.parent_edge(c).unwrap(),
                    delta,
                });
            }
        }
    }
    best
}

fn depths(tree: &RootedTree, n: usize) -> Vec<usize> {
    let mut depth = vec![0; n];
    for &v in tree.order() {
        if let Some(p) = tree.parent(v) {
            depth[v] = depth[p] + 1;
        }
    }
    depth
}

/// Branch exchange local search from `start`.
///
/// Non-tree edges are scanned in index order. For each, the best edge to
/// drop from the cycle it closes is found; if that lowers the energy by more
/// than the threshold the swap is made and the scan restarts.
pub fn branch_exchange(
    net: &Network,
    start: &RootedTree,
    budget: &LocalSearchBudget,
) -> Result<ExchangeOutcome, OracleError> {
    branch_exchange_with(net, start, budget, ExchangeRule::FirstImprovement)
}

pub fn branch_exchange_with(
    net: &Network,
    start: &RootedTree,
    budget: &LocalSearchBudget,
    rule: ExchangeRule,
) -> Result<ExchangeOutcome, OracleError> {
    budget.validate()?;
    let clock = Instant::now();
    let n = net.node_count();
    let mut tree = start.clone();
    let mut energy = tree_energy(net, &tree)?;
    let mut history = vec![(0.0, energy)];
    let mut moves = 0u64;
    // Moves must beat round-off as well as the configured threshold.
    let floor = |energy: f64| budget.improvement_threshold.max(1e-12 * energy.abs().max(1.0));
    let mut bar = match rule {
        ExchangeRule::FirstImprovement => 0.0,
        ExchangeRule::Halving => energy,
    };
    let stop = 'search: loop {
        if budget.target_energy.is_some_and(|t| energy <= t) {
            break StopReason::TargetReached;
        }
        if budget.max_iterations.is_some_and(|m| moves >= m) {
            break StopReason::IterationLimit;
        }
        let depth = depths(&tree, n);
        let sub = tree.subtree_demands(net);
        let need = floor(energy).max(bar);
        let mut applied = false;
        for added in 0..net.edge_count() {
            if budget.time_limit.is_some_and(|t| clock.elapsed() >= t) {
                break 'search StopReason::TimeLimit;
            }
            if tree.contains(added) {
                continue;
            }
            let Some(ex) = best_exchange(net, &tree, &depth, &sub, added) else {
                continue;
            };
            if -ex.delta > need {
                let mut edges: Vec<EdgeId> = tree.edges().iter().copied().filter(|&id| id != ex.removed).collect();
                edges.push(added);
                let next = RootedTree::from_edges(net, &edges)?;
                let next_energy = tree_energy(net, &next)?;
                if next_energy < energy {
                    tree = next;
                    energy = next_energy;
                    moves += 1;
                    history.push((clock.elapsed().as_secs_f64(), energy));
                    applied = true;
                    break;
                }
            }
        }
        if !applied {
            match rule {
                ExchangeRule::Halving if bar > floor(energy) => bar /= 2.0,
                _ => break StopReason::LocalOptimum,
            }
        }
    };
    Ok(ExchangeOutcome {
        tree,
        energy,
        moves,
        history,
        stop,
    })
}

/// Number of spanning trees: the determinant of the Laplacian (parallel
/// edges counted with multiplicity) with the root row and column removed,
/// by fraction-free Gaussian elimination.
pub fn kirchhoff_count(net: &Network) -> Result<u128, OracleError> {
    let n = net.node_count();
    if n <= 1 {
        return Ok(1);
    }
    let root = net.root();
    let idx = |v: NodeId| if v < root { v } else { v - 1 };
    let size = n - 1;
    let mut m = vec![vec![0i128; size]; size];
    for e in net.edges() {
        if e.u == e.v {
            continue;
        }
        for (a, b) in [(e.u, e.v), (e.v, e.u)] {
            if a != root {
                m[idx(a)][idx(a)] += 1;
                if b != root {
                    m[idx(a)][idx(b)] -= 1;
                }
            }
        }
    }
    let estimate = || {
        let dense = DMatrix::from_fn(size, size, |i, j| m_f64(net, root, i, j));
        OracleError::CountOverflow {
            estimate: dense.determinant(),
        }
    };
    bareiss(m).ok_or_else(estimate)
}

fn m_f64(net: &Network, root: NodeId, i: usize, j: usize) -> f64 {
    let node = |k: usize| if k < root { k } else { k + 1 };
    let (a, b) = (node(i), node(j));
    net.edges()
        .iter()
        .filter(|e| e.u != e.v)
        .map(|e| {
            if a == b {
                f64::from(e.touches(a))
            } else if (e.u == a && e.v == b) || (e.u == b && e.v == a) {
                -1.0
            } else {
                0.0
            }
        })
        .sum()
}

/// Exact determinant, or `None` on overflow.
fn bareiss(mut m: Vec<Vec<i128>>) -> Option<u128> {
    let size = m.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..size {
        if m[k][k] == 0 {
            let Some(swap) = (k + 1..size).find(|&i| m[i][k] != 0) else {
                return Some(0);
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let a = m[i][j].checked_mul(m[k][k])?;
                let b = m[i][k].checked_mul(m[k][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    let det = sign.checked_mul(m[size - 1][size - 1])?;
    u128::try_from(det).ok()
}

/// Disjoint sets with undo, for the deletion/contraction recursion.
struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
    log: Vec<Option<(usize, usize)>>,
    components: usize,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
            log: Vec::new(),
            components: n,
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            self.log.push(None);
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.components -= 1;
        self.log.push(Some((a, b)));
        true
    }

    fn undo(&mut self) {
        if let Some(Some((a, b))) = self.log.pop() {
            self.parent[b] = b;
            self.size[a] -= self.size[b];
            self.components += 1;
        }
    }
}

/// Calls `visit` with the edge set of every spanning tree, each exactly once.
///
/// The recursion decides edges from the highest index down: first with the
/// edge contracted (kept), then with it deleted when the rest still
/// connects the graph. Refuses when the tree count exceeds `cap`.
pub fn enumerate_spanning_trees(
    net: &Network,
    cap: u128,
    mut visit: impl FnMut(&[EdgeId]),
) -> Result<u128, OracleError> {
    let count = kirchhoff_count(net)?;
    if count > cap {
        return Err(OracleError::TooManyTrees { count, cap });
    }
    let mut dsu = Dsu::new(net.node_count());
    let mut chosen = Vec::with_capacity(net.node_count());
    let mut produced = 0u128;
    recurse(net, net.edge_count(), &mut dsu, &mut chosen, &mut |edges| {
        produced += 1;
        visit(edges);
    });
    Ok(produced)
}

fn recurse(
    net: &Network,
    undecided: usize,
    dsu: &mut Dsu,
    chosen: &mut Vec<EdgeId>,
    visit: &mut impl FnMut(&[EdgeId]),
) {
    if dsu.components == 1 {
        visit(chosen);
        return;
    }
    if undecided == 0 {
        return;
    }
    let id = undecided - 1;
    let e = net.edge(id);
    if dsu.find(e.u) == dsu.find(e.v) {
        recurse(net, id, dsu, chosen, visit);
        return;
    }
    dsu.union(e.u, e.v);
    chosen.push(id);
    recurse(net, id, dsu, chosen, visit);
    chosen.pop();
    dsu.undo();
    if still_connected(net, id, dsu) {
        recurse(net, id, dsu, chosen, visit);
    }
}

/// Whether edges `0..upto` join all current components.
fn still_connected(net: &Network, upto: usize, dsu: &Dsu) -> bool {
    let mut parent: Vec<usize> = (0..net.node_count()).map(|v| dsu.find(v)).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut components = dsu.components;
    for e in &net.edges()[..upto] {
        let (a, b) = (root(&mut parent, e.u), root(&mut parent, e.v));
        if a != b {
            parent[a] = b;
            components -= 1;
            if components == 1 {
                return true;
            }
        }
    }
    components == 1
}

/// Minimum-energy spanning tree by enumeration; the first minimum found wins.
pub fn brute_force_opt(net: &Network, cap: u128) -> Result<(RootedTree, f64), OracleError> {
    let mut best: Option<(Vec<EdgeId>, f64)> = None;
    let mut failure = None;
    enumerate_spanning_trees(net, cap, |edges| {
        match RootedTree::from_edges(net, edges).and_then(|t| tree_energy(net, &t)) {
            Ok(e) => {
                if best.as_ref().is_none_or(|b| e < b.1) {
                    best = Some((edges.to_vec(), e));
                }
            }
            Err(err) => failure = Some(err),
        }
    })?;
    if let Some(err) = failure {
        return Err(err.into());
    }
    let (edges, energy) = best.expect("a connected network has a spanning tree");
    Ok((RootedTree::from_edges(net, &edges)?, energy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures::*;
    use crate::network::{is_spanning_tree, Edge};
    use proptest::prelude::*;
    use std::collections::BTreeSet;

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

    fn wheel(n: usize) -> Network {
        let mut edges: Vec<Edge> = (1..=n).map(|i| Edge::new(0, i, 1.0)).collect();
        edges.extend((1..=n).map(|i| Edge::new(i, i % n + 1, 1.0)));
        Network::new(n + 1, edges, 0, vec![1.0; n + 1]).unwrap()
    }

    #[test]
    fn dfs_on_a_path_is_the_path() {
        let net = path3(1.0, 1.0);
        assert_eq!(dfs_tree(&net, 5).unwrap().edges(), &[0, 1]);
    }

    #[test]
    fn dfs_is_seeded() {
        let net = grid(4, 4);
        assert_eq!(dfs_tree(&net, 9).unwrap(), dfs_tree(&net, 9).unwrap());
        let distinct: BTreeSet<Vec<EdgeId>> = (0..20).map(|s| dfs_tree(&net, s).unwrap().edges().to_vec()).collect();
        assert!(distinct.len() > 1);
    }

    #[test]
    fn dfs_on_a_wheel_walks_the_rim() {
        let n = 12;
        let net = wheel(n);
        let star = RootedTree::from_edges(&net, &(0..n).collect::<Vec<_>>()).unwrap();
        assert_eq!(tree_energy(&net, &star).unwrap(), n as f64);
        for seed in 0..10 {
            let t = dfs_tree(&net, seed).unwrap();
            let cubic = (n * (n + 1) * (2 * n + 1) / 6) as f64;
            assert_eq!(tree_energy(&net, &t).unwrap(), cubic);
        }
    }

    #[test]
    fn exchange_fixes_the_worst_four_cycle_tree() {
        let net = four_cycle();
        // Dropping (0,1) leaves the path 0-3-2-1 with flows 3,2,1.
        let worst = RootedTree::from_edges(&net, &[1, 2, 3]).unwrap();
        assert_eq!(tree_energy(&net, &worst).unwrap(), 14.0);
        let out = branch_exchange(&net, &worst, &LocalSearchBudget::iterations(100)).unwrap();
        assert_eq!(out.energy, 6.0);
        assert_eq!(out.moves, 1);
        assert_eq!(out.stop, StopReason::LocalOptimum);
        assert_eq!(out.history, vec![(0.0, 14.0), (out.history[1].0, 6.0)]);
    }

    #[test]
    fn exchange_delta_matches_recomputation() {
        let net = Network::new(
            5,
            vec![
                Edge::new(0, 1, 1.0),
                Edge::new(1, 2, 2.0),
                Edge::new(2, 3, 0.5),
                Edge::new(3, 4, 3.0),
                Edge::new(0, 4, 1.5),
                Edge::new(1, 3, 2.5),
            ],
            0,
            vec![0.0, 1.0, 0.5, 2.0, 1.5],
        )
        .unwrap();
        let tree = RootedTree::from_edges(&net, &[0, 1, 2, 3]).unwrap();
        let base = tree_energy(&net, &tree).unwrap();
        let depth = depths(&tree, 5);
        let sub = tree.subtree_demands(&net);
        for added in [4, 5] {
            let ex = best_exchange(&net, &tree, &depth, &sub, added).unwrap();
            let mut edges: Vec<EdgeId> = tree.edges().iter().copied().filter(|&e| e != ex.removed).collect();
            edges.push(added);
            let next = RootedTree::from_edges(&net, &edges).unwrap();
            let after = tree_energy(&net, &next).unwrap();
            assert!((after - base - ex.delta).abs() < 1e-9);
        }
    }

    #[test]
    fn budgets() {
        let unbounded = LocalSearchBudget {
            max_iterations: None,
            time_limit: None,
            improvement_threshold: 0.0,
            target_energy: None,
        };
        assert!(matches!(unbounded.validate(), Err(OracleError::UnboundedBudget)));
        let net = four_cycle();
        let worst = RootedTree::from_edges(&net, &[1, 2, 3]).unwrap();
        let out = branch_exchange(&net, &worst, &LocalSearchBudget::iterations(0)).unwrap();
        assert_eq!(out.stop, StopReason::IterationLimit);
        assert_eq!(out.energy, 14.0);
        let mut picky = LocalSearchBudget::iterations(10);
        picky.improvement_threshold = 100.0;
        assert_eq!(branch_exchange(&net, &worst, &picky).unwrap().energy, 14.0);
    }

    #[test]
    fn counts() {
        assert_eq!(kirchhoff_count(&path3(1.0, 1.0)).unwrap(), 1);
        assert_eq!(kirchhoff_count(&four_cycle()).unwrap(), 4);
        assert_eq!(kirchhoff_count(&grid(3, 3)).unwrap(), 192);
        assert_eq!(kirchhoff_count(&grid(4, 4)).unwrap(), 100_352);
        let mut n = 0;
        enumerate_spanning_trees(&four_cycle(), DEFAULT_ENUMERATION_CAP, |_| n += 1).unwrap();
        assert_eq!(n, 4);
        let mut seen = BTreeSet::new();
        let net = grid(3, 3);
        let count = enumerate_spanning_trees(&net, DEFAULT_ENUMERATION_CAP, |t| {
            assert!(is_spanning_tree(&net, t));
            let mut t = t.to_vec();
            t.sort_unstable();
            assert!(seen.insert(t));
        })
        .unwrap();
        assert_eq!(count, 192);
    }

    #[test]
    fn four_by_four_enumeration() {
        let count = enumerate_spanning_trees(&grid(4, 4), DEFAULT_ENUMERATION_CAP, |_| {}).unwrap();
        assert_eq!(count, 100_352);
    }

    #[test]
    fn cap_refusal_reports_the_count() {
        match enumerate_spanning_trees(&grid(3, 3), 100, |_| {}) {
            Err(OracleError::TooManyTrees { count, cap }) => assert_eq!((count, cap), (192, 100)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn overflow_reports_an_estimate() {
        // A 12x12 grid has about 5.5e61 spanning trees.
        match kirchhoff_count(&grid(12, 12)) {
            Err(OracleError::CountOverflow { estimate }) => assert!(estimate > 1e38),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn brute_force_small_cases() {
        assert_eq!(brute_force_opt(&four_cycle(), DEFAULT_ENUMERATION_CAP).unwrap().1, 6.0);
        assert_eq!(brute_force_opt(&grid(3, 3), DEFAULT_ENUMERATION_CAP).unwrap().1, 52.0);
        let edges = (0..8).map(|i| Edge::new(i, (i + 1) % 8, 1.0)).collect();
        let mut d = vec![0.0; 8];
        d[4] = 1.0;
        let cyc = Network::new(8, edges, 0, d).unwrap();
        assert_eq!(brute_force_opt(&cyc, DEFAULT_ENUMERATION_CAP).unwrap().1, 4.0);
    }

    #[test]
    fn optimum_is_a_fixed_point() {
        let net = grid(3, 3);
        let (opt, e) = brute_force_opt(&net, DEFAULT_ENUMERATION_CAP).unwrap();
        let out = branch_exchange(&net, &opt, &LocalSearchBudget::iterations(10)).unwrap();
        assert_eq!(out.moves, 0);
        assert_eq!(out.energy, e);
    }

    fn random_graph() -> impl Strategy<Value = Network> {
        (3usize..8)
            .prop_flat_map(|n| {
                (
                    Just(n),
                    proptest::collection::vec(0usize..1000, n - 1),
                    proptest::collection::vec((0usize..n, 0usize..n, 0.5f64..4.0), 0..8),
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
        fn enumeration_matches_the_count(net in random_graph()) {
            let mut seen = BTreeSet::new();
            let count = enumerate_spanning_trees(&net, DEFAULT_ENUMERATION_CAP, |t| {
                let mut t = t.to_vec();
                t.sort_unstable();
                seen.insert(t);
            }).unwrap();
            prop_assert_eq!(count, kirchhoff_count(&net).unwrap());
            prop_assert_eq!(seen.len() as u128, count);
        }

        #[test]
        fn exchange_is_monotone_and_bounded_below(net in random_graph(), seed in any::<u64>()) {
            let start = dfs_tree(&net, seed).unwrap();
            prop_assert!(is_spanning_tree(&net, start.edges()));
            let out = branch_exchange(&net, &start, &LocalSearchBudget::iterations(1000)).unwrap();
            prop_assert!(out.history.windows(2).all(|w| w[1].1 < w[0].1));
            let (_, opt) = brute_force_opt(&net, DEFAULT_ENUMERATION_CAP).unwrap();
            prop_assert!(out.energy >= opt * (1.0 - 1e-12));
            let halving = branch_exchange_with(&net, &start, &LocalSearchBudget::iterations(1000), ExchangeRule::Halving).unwrap();
            prop_assert!(halving.history.windows(2).all(|w| w[1].1 < w[0].1));
            prop_assert!(halving.energy >= opt * (1.0 - 1e-12));
        }
    }
}
