//! Problem instances and candidate solutions.
//!
//! A [`Network`] is an undirected multigraph with a designated root (the
//! substation), a positive resistance per edge and a nonnegative demand per
//! non-root node. The root supplies everything, so its demand is always the
//! negated sum of the others and is never stored.
//!
//! Edges are addressed by index. Each edge has a fixed reference orientation
//! from its lower-numbered endpoint (tail) to its higher-numbered endpoint
//! (head); signed flows in a [`FlowAssignment`] are measured along it.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a node.
pub type NodeId = usize;
/// Index of an edge.
pub type EdgeId = usize;

/// Undirected edge with a resistance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    #[serde(rename = "r")]
    pub resistance: f64,
}

impl Edge {
    pub fn new(u: NodeId, v: NodeId, resistance: f64) -> Self {
        Self { u, v, resistance }
    }

    /// Lower endpoint; flows are positive when they leave it.
    pub fn tail(&self) -> NodeId {
        self.u.min(self.v)
    }

    /// Higher endpoint; flows are positive when they enter it.
    pub fn head(&self) -> NodeId {
        self.u.max(self.v)
    }

    pub fn conductance(&self) -> f64 {
        1.0 / self.resistance
    }

    /// The endpoint that is not `x`. Panics if `x` is not an endpoint.
    pub fn other(&self, x: NodeId) -> NodeId {
        if x == self.u {
            self.v
        } else {
            assert_eq!(x, self.v, "node {x} is not an endpoint");
            self.u
        }
    }

    pub fn touches(&self, x: NodeId) -> bool {
        self.u == x || self.v == x
    }
}

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("invalid network: {0}")]
    Invalid(ValidationReport),
    #[error("edge set is not a spanning tree: {0}")]
    NotSpanningTree(String),
    #[error("edge {0} does not exist")]
    UnknownEdge(EdgeId),
    #[error("malformed instance file: {0}")]
    Format(#[from] serde_json::Error),
}

/// A single broken instance invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NoNodes,
    RootOutOfRange { root: NodeId },
    EndpointOutOfRange { edge: EdgeId },
    SelfLoop { edge: EdgeId },
    NonpositiveResistance { edge: EdgeId, resistance: f64 },
    NegativeDemand { node: NodeId, demand: f64 },
    NonFiniteDemand { node: NodeId },
    DemandLength { expected: usize, found: usize },
    Disconnected { reached: usize, total: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoNodes => write!(f, "network has no nodes"),
            Violation::RootOutOfRange { root } => write!(f, "root {root} out of range"),
            Violation::EndpointOutOfRange { edge } => {
                write!(f, "edge {edge} has an endpoint out of range")
            }
            Violation::SelfLoop { edge } => write!(f, "edge {edge} is a self-loop"),
            Violation::NonpositiveResistance { edge, resistance } => {
                write!(f, "nonpositive resistance {resistance} on edge {edge}")
            }
            Violation::NegativeDemand { node, demand } => {
                write!(f, "negative demand {demand} at node {node}")
            }
            Violation::NonFiniteDemand { node } => write!(f, "non-finite demand at node {node}"),
            Violation::DemandLength { expected, found } => {
                write!(f, "expected {expected} demands, found {found}")
            }
            Violation::Disconnected { reached, total } => {
                write!(f, "disconnected: root reaches {reached} of {total} nodes")
            }
        }
    }
}

/// Outcome of [`validate_network`]: empty means valid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// An electrical distribution network instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    node_count: usize,
    edges: Vec<Edge>,
    root: NodeId,
    // Indexed by node; the root entry is held at zero and never read.
    demands: Vec<f64>,
    adjacency: Vec<Vec<EdgeId>>,
}

impl Network {
    /// Builds and validates a network.
    pub fn new(
        node_count: usize,
        edges: Vec<Edge>,
        root: NodeId,
        demands: Vec<f64>,
    ) -> Result<Self, NetworkError> {
        let net = Self::from_parts(node_count, edges, root, demands);
        let report = validate_network(&net);
        if report.is_valid() {
            Ok(net)
        } else {
            Err(NetworkError::Invalid(report))
        }
    }

    /// Builds a network without validating it. Out-of-range endpoints are
    /// kept in the edge list but left out of the adjacency lists.
    pub fn from_parts(
        node_count: usize,
        edges: Vec<Edge>,
        root: NodeId,
        mut demands: Vec<f64>,
    ) -> Self {
        let mut adjacency = vec![Vec::new(); node_count];
        for (id, e) in edges.iter().enumerate() {
            if e.u < node_count && e.v < node_count {
                adjacency[e.u].push(id);
                if e.v != e.u {
                    adjacency[e.v].push(id);
                }
            }
        }
        if root < demands.len() {
            demands[root] = 0.0;
        }
        Self {
            node_count,
            edges,
            root,
            demands,
            adjacency,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    /// Edges incident to `node`, in increasing index order.
    pub fn incident(&self, node: NodeId) -> &[EdgeId] {
        &self.adjacency[node]
    }

    /// Demand of a node; the root's is the negated total of all others.
    pub fn demand(&self, node: NodeId) -> f64 {
        if node == self.root {
            -self.total_demand()
        } else {
            self.demands[node]
        }
    }

    /// Sum of all non-root demands.
    pub fn total_demand(&self) -> f64 {
        self.demands.iter().sum()
    }

    /// Full demand vector `b` including the (negative) root entry.
    pub fn demand_vector(&self) -> Vec<f64> {
        let mut b = self.demands.clone();
        b[self.root] = -self.total_demand();
        b
    }

    /// Same graph with new non-root demands (root entry ignored).
    pub fn with_demands(&self, demands: Vec<f64>) -> Result<Self, NetworkError> {
        Self::new(self.node_count, self.edges.clone(), self.root, demands)
    }

    pub fn is_uniform_resistance(&self) -> bool {
        match self.edges.first() {
            None => true,
            Some(first) => self.edges.iter().all(|e| e.resistance == first.resistance),
        }
    }

    /// Reads the JSON instance format and validates the result.
    pub fn from_json(text: &str) -> Result<Self, NetworkError> {
        let file: InstanceFile = serde_json::from_str(text)?;
        Self::new(file.nodes, file.edges, file.root, file.demands)
    }

    /// Writes the JSON instance format. The root's demand entry is written as 0.
    pub fn to_json(&self) -> String {
        let file = InstanceFile {
            nodes: self.node_count,
            root: self.root,
            edges: self.edges.clone(),
            demands: self.demands.clone(),
        };
        serde_json::to_string_pretty(&file).expect("instance serialization cannot fail")
    }

    /// Nodes reachable from the root using only the given edges.
    pub(crate) fn reach_from_root(&self, allowed: impl Fn(EdgeId) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.node_count];
        if self.root >= self.node_count {
            return seen;
        }
        let mut queue = VecDeque::from([self.root]);
        seen[self.root] = true;
        while let Some(x) = queue.pop_front() {
            for &id in &self.adjacency[x] {
                if !allowed(id) {
                    continue;
                }
                let y = self.edges[id].other(x);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }
}

/// On-disk instance layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct InstanceFile {
    nodes: usize,
    root: NodeId,
    edges: Vec<Edge>,
    demands: Vec<f64>,
}

/// Checks every instance invariant and reports all violations found.
pub fn validate_network(net: &Network) -> ValidationReport {
    let mut violations = Vec::new();
    let n = net.node_count;
    if n == 0 {
        violations.push(Violation::NoNodes);
        return ValidationReport { violations };
    }
    if net.root >= n {
        violations.push(Violation::RootOutOfRange { root: net.root });
    }
    for (id, e) in net.edges.iter().enumerate() {
        if e.u >= n || e.v >= n {
            violations.push(Violation::EndpointOutOfRange { edge: id });
        } else if e.u == e.v {
            violations.push(Violation::SelfLoop { edge: id });
        }
        if !(e.resistance > 0.0 && e.resistance.is_finite()) {
            violations.push(Violation::NonpositiveResistance {
                edge: id,
                resistance: e.resistance,
            });
        }
    }
    if net.demands.len() != n {
        violations.push(Violation::DemandLength {
            expected: n,
            found: net.demands.len(),
        });
    } else {
        for (node, &d) in net.demands.iter().enumerate() {
            if node == net.root {
                continue;
            }
            if !d.is_finite() {
                violations.push(Violation::NonFiniteDemand { node });
            } else if d < 0.0 {
                violations.push(Violation::NegativeDemand { node, demand: d });
            }
        }
    }
    if net.root < n {
        let reached = net
            .reach_from_root(|id| net.edges[id].u != net.edges[id].v)
            .iter()
            .filter(|&&s| s)
            .count();
        if reached != n {
            violations.push(Violation::Disconnected { reached, total: n });
        }
    }
    ValidationReport { violations }
}

/// True iff `edges` (a subset of the network's edges) is a spanning tree.
pub fn is_spanning_tree(net: &Network, edges: &[EdgeId]) -> bool {
    let n = net.node_count();
    if n == 0 || edges.len() != n - 1 {
        return false;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &id in edges {
        let Some(e) = net.edges().get(id) else {
            return false;
        };
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    // n - 1 acyclic edges on n nodes are necessarily connected.
    true
}

/// A spanning tree oriented toward the network root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    root: NodeId,
    edges: Vec<EdgeId>,
    parent_edge: Vec<Option<EdgeId>>,
    parent: Vec<Option<NodeId>>,
    // Breadth-first order from the root; parents precede children.
    order: Vec<NodeId>,
}

impl RootedTree {
    /// Orients an edge set toward the root, failing unless it spans the network.
    pub fn from_edges(net: &Network, edges: &[EdgeId]) -> Result<Self, NetworkError> {
        let n = net.node_count();
        if let Some(&bad) = edges.iter().find(|&&id| id >= net.edge_count()) {
            return Err(NetworkError::UnknownEdge(bad));
        }
        if edges.len() + 1 != n {
            return Err(NetworkError::NotSpanningTree(format!(
                "{} edges for {} nodes",
                edges.len(),
                n
            )));
        }
        let mut in_tree = vec![false; net.edge_count()];
        for &id in edges {
            if in_tree[id] {
                return Err(NetworkError::NotSpanningTree(format!("edge {id} repeated")));
            }
            in_tree[id] = true;
        }
        let mut parent_edge = vec![None; n];
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([net.root()]);
        seen[net.root()] = true;
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &id in net.incident(x) {
                if !in_tree[id] {
                    continue;
                }
                let y = net.edge(id).other(x);
                if y == x {
                    return Err(NetworkError::NotSpanningTree(format!("self-loop {id}")));
                }
                if !seen[y] {
                    seen[y] = true;
                    parent_edge[y] = Some(id);
                    parent[y] = Some(x);
                    queue.push_back(y);
                }
            }
        }
        if order.len() != n {
            return Err(NetworkError::NotSpanningTree(format!(
                "reaches {} of {} nodes",
                order.len(),
                n
            )));
        }
        let mut sorted = edges.to_vec();
        sorted.sort_unstable();
        Ok(Self {
            root: net.root(),
            edges: sorted,
            parent_edge,
            parent,
            order,
        })
    }

    /// Builds a tree from a parent-edge assignment (`None` only at the root).
    pub fn from_parent_edges(
        net: &Network,
        parent_edges: &[Option<EdgeId>],
    ) -> Result<Self, NetworkError> {
        let edges: Vec<EdgeId> = parent_edges.iter().flatten().copied().collect();
        let tree = Self::from_edges(net, &edges)?;
        if tree.parent_edge != parent_edges {
            return Err(NetworkError::NotSpanningTree(
                "parent assignment does not point toward the root".into(),
            ));
        }
        Ok(tree)
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    /// Tree edges in increasing index order.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn parent_edge(&self, node: NodeId) -> Option<EdgeId> {
        self.parent_edge[node]
    }

    pub fn parent(&self, node: NodeId) -> Option<NodeId> {
        self.parent[node]
    }

    pub fn parent_edges(&self) -> &[Option<EdgeId>] {
        &self.parent_edge
    }

    /// Nodes in breadth-first order from the root.
    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn contains(&self, edge: EdgeId) -> bool {
        self.edges.binary_search(&edge).is_ok()
    }

    /// Total demand of each node's subtree (the node included).
    pub fn subtree_demands(&self, net: &Network) -> Vec<f64> {
        let mut sums: Vec<f64> = (0..net.node_count())
            .map(|v| if v == self.root { 0.0 } else { net.demand(v) })
            .collect();
        for &v in self.order.iter().rev() {
            if let Some(p) = self.parent[v] {
                sums[p] += sums[v];
            }
        }
        sums
    }
}

/// Signed per-edge flow, optionally with the node potentials that induced it.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowAssignment {
    /// Flow along each edge's tail-to-head orientation.
    pub flow: Vec<f64>,
    pub potentials: Option<Vec<f64>>,
}

impl FlowAssignment {
    /// Σ r_e f_e² over all edges.
    pub fn energy(&self, net: &Network) -> f64 {
        net.edges()
            .iter()
            .zip(&self.flow)
            .map(|(e, f)| e.resistance * f * f)
            .sum()
    }

    /// Largest absolute violation of inflow − outflow = demand over all nodes.
    pub fn conservation_residual(&self, net: &Network) -> f64 {
        let mut net_in = vec![0.0; net.node_count()];
        for (e, &f) in net.edges().iter().zip(&self.flow) {
            net_in[e.head()] += f;
            net_in[e.tail()] -= f;
        }
        net_in
            .iter()
            .enumerate()
            .map(|(v, x)| (x - net.demand(v)).abs())
            .fold(0.0, f64::max)
    }
}

fn check_tree(net: &Network, tree: &RootedTree) -> Result<(), NetworkError> {
    if tree.root != net.root() || tree.parent_edge.len() != net.node_count() {
        return Err(NetworkError::NotSpanningTree(
            "tree belongs to a different network".into(),
        ));
    }
    Ok(())
}

/// The unique demand-satisfying flow supported on `tree`: every tree edge
/// carries the total demand of the subtree hanging below it.
pub fn tree_flow(net: &Network, tree: &RootedTree) -> Result<FlowAssignment, NetworkError> {
    check_tree(net, tree)?;
    let sums = tree.subtree_demands(net);
    let mut flow = vec![0.0; net.edge_count()];
    for v in 0..net.node_count() {
        if let Some(id) = tree.parent_edge[v] {
            // Flow runs from parent to child.
            flow[id] = if net.edge(id).head() == v {
                sums[v]
            } else {
                -sums[v]
            };
        }
    }
    Ok(FlowAssignment {
        flow,
        potentials: None,
    })
}

/// Σ r_e f_e² of the tree flow.
pub fn tree_energy(net: &Network, tree: &RootedTree) -> Result<f64, NetworkError> {
    check_tree(net, tree)?;
    let sums = tree.subtree_demands(net);
    Ok((0..net.node_count())
        .filter_map(|v| tree.parent_edge[v].map(|id| net.edge(id).resistance * sums[v] * sums[v]))
        .sum())
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn unit_edges(pairs: &[(usize, usize)]) -> Vec<Edge> {
        pairs.iter().map(|&(u, v)| Edge::new(u, v, 1.0)).collect()
    }

    /// r=0 – a=1 – b=2 – c=3 – r, unit resistances and demands.
    pub fn four_cycle() -> Network {
        Network::new(
            4,
            unit_edges(&[(0, 1), (1, 2), (2, 3), (3, 0)]),
            0,
            vec![0.0, 1.0, 1.0, 1.0],
        )
        .unwrap()
    }

    pub fn path3(da: f64, db: f64) -> Network {
        Network::new(3, unit_edges(&[(0, 1), (1, 2)]), 0, vec![0.0, da, db]).unwrap()
    }

    pub fn triangle() -> Network {
        Network::new(
            3,
            unit_edges(&[(0, 1), (1, 2), (0, 2)]),
            0,
            vec![0.0, 1.0, 1.0],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn four_cycle_is_valid() {
        assert!(validate_network(&four_cycle()).is_valid());
    }

    #[test]
    fn disconnected_is_reported() {
        let net = Network::from_parts(4, unit_edges(&[(0, 1), (2, 3)]), 0, vec![0.0; 4]);
        let report = validate_network(&net);
        assert!(matches!(report.violations[..], [Violation::Disconnected { .. }]));
        assert!(report.to_string().contains("disconnected"));
    }

    #[test]
    fn zero_resistance_is_reported() {
        let net = Network::from_parts(
            2,
            vec![Edge::new(0, 1, 0.0)],
            0,
            vec![0.0, 1.0],
        );
        let report = validate_network(&net);
        assert!(report.to_string().contains("nonpositive resistance"));
        assert!(Network::new(2, vec![Edge::new(0, 1, 0.0)], 0, vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn self_loops_and_negative_demands_are_reported() {
        let net = Network::from_parts(
            2,
            vec![Edge::new(0, 1, 1.0), Edge::new(1, 1, 1.0)],
            0,
            vec![0.0, -1.0],
        );
        let report = validate_network(&net);
        assert!(report.violations.contains(&Violation::SelfLoop { edge: 1 }));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NegativeDemand { node: 1, .. })));
    }

    #[test]
    fn single_node_network() {
        let net = Network::new(1, vec![], 0, vec![0.0]).unwrap();
        let tree = RootedTree::from_edges(&net, &[]).unwrap();
        assert_eq!(tree_energy(&net, &tree).unwrap(), 0.0);
        assert!(is_spanning_tree(&net, &[]));
    }

    #[test]
    fn root_demand_is_derived() {
        let net = Network::new(3, unit_edges(&[(0, 1), (1, 2)]), 0, vec![7.0, 1.0, 2.0]).unwrap();
        assert_eq!(net.demand(0), -3.0);
        assert_eq!(net.demand_vector(), vec![-3.0, 1.0, 2.0]);
    }

    #[test]
    fn path_tree_flow() {
        let net = path3(1.0, 2.0);
        let tree = RootedTree::from_edges(&net, &[0, 1]).unwrap();
        let flow = tree_flow(&net, &tree).unwrap();
        assert_eq!(flow.flow, vec![3.0, 2.0]);
        assert_eq!(tree_energy(&net, &tree).unwrap(), 13.0);
        assert!(flow.conservation_residual(&net) < 1e-12);
    }

    #[test]
    fn star_tree_flow() {
        let net = Network::new(
            5,
            unit_edges(&[(0, 1), (0, 2), (0, 3), (0, 4)]),
            0,
            vec![0.0, 1.0, 1.0, 1.0, 1.0],
        )
        .unwrap();
        let tree = RootedTree::from_edges(&net, &[0, 1, 2, 3]).unwrap();
        assert!(tree_flow(&net, &tree).unwrap().flow.iter().all(|&f| f == 1.0));
    }

    #[test]
    fn flow_sign_follows_orientation() {
        // Edge stored as (2, 0): tail 0, head 2; flow from root 0 into 2 is positive.
        let net = Network::new(
            3,
            vec![Edge::new(2, 0, 1.0), Edge::new(2, 1, 1.0)],
            2,
            vec![1.0, 1.0, 0.0],
        )
        .unwrap();
        let tree = RootedTree::from_edges(&net, &[0, 1]).unwrap();
        let flow = tree_flow(&net, &tree).unwrap();
        // root is 2 = head of both edges, so flow leaves the head: negative.
        assert_eq!(flow.flow, vec![-1.0, -1.0]);
        assert!(flow.conservation_residual(&net) < 1e-12);
    }

    #[test]
    fn four_cycle_tree_energies() {
        let net = four_cycle();
        // Remove (a,b): r–a carries 1, r–c–b carries 2 then 1.
        let tree = RootedTree::from_edges(&net, &[0, 2, 3]).unwrap();
        assert_eq!(tree_energy(&net, &tree).unwrap(), 6.0);
        // Remove (r,a): the path r–c–b–a carries 3, 2, 1.
        let tree = RootedTree::from_edges(&net, &[1, 2, 3]).unwrap();
        assert_eq!(tree_energy(&net, &tree).unwrap(), 14.0);
    }

    #[test]
    fn spanning_tree_predicate() {
        let net = four_cycle();
        assert!(is_spanning_tree(&net, &[0, 1, 2]));
        assert!(!is_spanning_tree(&net, &[0, 1, 2, 3]));
        let net = Network::from_parts(
            4,
            unit_edges(&[(0, 1), (1, 2), (2, 0), (2, 3)]),
            0,
            vec![0.0; 4],
        );
        assert!(!is_spanning_tree(&net, &[0, 1, 2]));
        assert!(RootedTree::from_edges(&net, &[0, 1, 2]).is_err());
    }

    #[test]
    fn parallel_edges_are_distinct() {
        let net = Network::new(2, unit_edges(&[(0, 1), (0, 1)]), 0, vec![0.0, 1.0]).unwrap();
        assert!(is_spanning_tree(&net, &[1]));
        let tree = RootedTree::from_edges(&net, &[1]).unwrap();
        assert_eq!(tree.parent_edge(1), Some(1));
    }

    #[test]
    fn json_round_trip_is_stable() {
        let text = r#"{
  "nodes": 3,
  "root": 0,
  "edges": [
    {
      "u": 0,
      "v": 1,
      "r": 0.1
    },
    {
      "u": 2,
      "v": 1,
      "r": 2.5
    }
  ],
  "demands": [
    0.0,
    1.25,
    0.3
  ]
}"#;
        let net = Network::from_json(text).unwrap();
        assert_eq!(net.to_json(), text);
        assert_eq!(Network::from_json(&net.to_json()).unwrap(), net);
    }

    #[test]
    fn json_rejects_invalid_instances() {
        let text = r#"{"nodes": 2, "root": 0, "edges": [], "demands": [0, 1]}"#;
        assert!(matches!(Network::from_json(text), Err(NetworkError::Invalid(_))));
    }
}
