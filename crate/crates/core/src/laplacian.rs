//! Weighted graph Laplacians, their pseudoinverse, and electrical flows.
//!
//! [`LaplacianState`] keeps the dense Laplacian `L = B C Bᵀ` of the currently
//! active edge set together with its Moore–Penrose pseudoinverse `L†`. Edge
//! deletions are applied as rank-one updates to `L†`; every
//! `refresh_interval` deletions the pseudoinverse is recomputed from scratch
//! to stop round-off from accumulating.
//!
//! [`grounded_electrical_flow`] is an independent route to the same flow: it
//! grounds the root and solves the sparse reduced system by an envelope
//! Cholesky factorization.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use thiserror::Error;

use crate::network::{Edge, EdgeId, FlowAssignment, Network, NodeId};

/// Deletions between full recomputations of the pseudoinverse.
pub const DEFAULT_REFRESH_INTERVAL: usize = 50;

/// An edge is treated as a bridge when `1 − c_e·Reff(e)` falls to this level.
pub const BRIDGE_TOLERANCE: f64 = 1e-9;

/// Largest tolerated `|Σ b|` for a demand vector.
pub const DEMAND_BALANCE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum LaplacianError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("effective resistance needs two distinct nodes (got {0} twice)")]
    SameNode(NodeId),
    #[error("node {0} out of range")]
    NodeOutOfRange(NodeId),
    #[error("deleting edge {0} would disconnect the graph")]
    Bridge(EdgeId),
    #[error("edge {0} is not active")]
    InactiveEdge(EdgeId),
    #[error("demands do not balance: sum is {0}")]
    DemandImbalance(f64),
    #[error("expected a vector of length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Laplacian and pseudoinverse of a connected subgraph, maintained under deletions.
#[derive(Debug, Clone)]
pub struct LaplacianState {
    edges: Vec<Edge>,
    active: Vec<bool>,
    active_count: usize,
    laplacian: DMatrix<f64>,
    pinv: DMatrix<f64>,
    deletions_since_refresh: usize,
    refresh_interval: usize,
}

impl LaplacianState {
    /// Assembles `L` for all edges of `net` and computes `L†`.
    pub fn build(net: &Network) -> Result<Self, LaplacianError> {
        Self::build_with_refresh(net, DEFAULT_REFRESH_INTERVAL)
    }

    pub fn build_with_refresh(net: &Network, refresh_interval: usize) -> Result<Self, LaplacianError> {
        let n = net.node_count();
        let reached = net.reach_from_root(|_| true);
        if reached.iter().any(|&r| !r) {
            return Err(LaplacianError::Disconnected);
        }
        let mut laplacian = DMatrix::zeros(n, n);
        for e in net.edges() {
            stamp(&mut laplacian, e.u, e.v, e.conductance());
        }
        let pinv = pseudoinverse(&laplacian)?;
        Ok(Self {
            edges: net.edges().to_vec(),
            active: vec![true; net.edge_count()],
            active_count: net.edge_count(),
            laplacian,
            pinv,
            deletions_since_refresh: 0,
            refresh_interval: refresh_interval.max(1),
        })
    }

    pub fn node_count(&self) -> usize {
        self.laplacian.nrows()
    }

    /// Number of edges in the network the state was built from.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn active_edge_count(&self) -> usize {
        self.active_count
    }

    pub fn is_active(&self, edge: EdgeId) -> bool {
        self.active[edge]
    }

    pub fn active_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).filter(|&e| self.active[e])
    }

    pub fn edge(&self, edge: EdgeId) -> &Edge {
        &self.edges[edge]
    }

    pub fn laplacian(&self) -> &DMatrix<f64> {
        &self.laplacian
    }

    pub fn pseudoinverse(&self) -> &DMatrix<f64> {
        &self.pinv
    }

    pub fn deletions_since_refresh(&self) -> usize {
        self.deletions_since_refresh
    }

    pub fn refresh_interval(&self) -> usize {
        self.refresh_interval
    }

    /// `χ_uvᵀ L† χ_uv`.
    pub fn effective_resistance(&self, u: NodeId, v: NodeId) -> Result<f64, LaplacianError> {
        let n = self.node_count();
        for x in [u, v] {
            if x >= n {
                return Err(LaplacianError::NodeOutOfRange(x));
            }
        }
        if u == v {
            return Err(LaplacianError::SameNode(u));
        }
        Ok(self.reff_unchecked(u, v))
    }

    fn reff_unchecked(&self, u: NodeId, v: NodeId) -> f64 {
        let p = &self.pinv;
        p[(u, u)] + p[(v, v)] - 2.0 * p[(u, v)]
    }

    /// Effective resistance between the endpoints of an edge.
    pub fn edge_effective_resistance(&self, edge: EdgeId) -> f64 {
        let e = &self.edges[edge];
        self.reff_unchecked(e.u, e.v)
    }

    /// `c_e · Reff(e)`: the probability that `e` lies in a random spanning
    /// tree drawn with weight proportional to the product of conductances.
    pub fn leverage(&self, edge: EdgeId) -> f64 {
        self.edges[edge].conductance() * self.edge_effective_resistance(edge)
    }

    /// `1 − c_e·Reff(e)`, clamped below at zero.
    pub fn slack(&self, edge: EdgeId) -> f64 {
        (1.0 - self.leverage(edge)).max(0.0)
    }

    pub fn is_bridge(&self, edge: EdgeId) -> bool {
        let e = &self.edges[edge];
        1.0 - self.leverage(edge) <= BRIDGE_TOLERANCE * (e.conductance() * e.resistance).max(1.0)
    }

    /// Node potentials `φ = L† b`.
    pub fn potentials(&self, b: &[f64]) -> Result<Vec<f64>, LaplacianError> {
        let n = self.node_count();
        if b.len() != n {
            return Err(LaplacianError::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        let sum: f64 = b.iter().sum();
        let scale = b.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
        if sum.abs() > DEMAND_BALANCE_TOLERANCE * scale {
            return Err(LaplacianError::DemandImbalance(sum));
        }
        let phi = &self.pinv * DVector::from_column_slice(b);
        Ok(phi.as_slice().to_vec())
    }

    /// Ohm's-law flow on an edge for the given potentials (zero if inactive).
    pub fn flow_on(&self, potentials: &[f64], edge: EdgeId) -> f64 {
        if !self.active[edge] {
            return 0.0;
        }
        let e = &self.edges[edge];
        (potentials[e.head()] - potentials[e.tail()]) * e.conductance()
    }

    /// Electrical flow meeting the network's demands on the active edges.
    pub fn electrical_flow(&self, net: &Network) -> Result<FlowAssignment, LaplacianError> {
        self.electrical_flow_for(&net.demand_vector())
    }

    pub fn electrical_flow_for(&self, b: &[f64]) -> Result<FlowAssignment, LaplacianError> {
        let phi = self.potentials(b)?;
        let flow = (0..self.edges.len()).map(|e| self.flow_on(&phi, e)).collect();
        Ok(FlowAssignment {
            flow,
            potentials: Some(phi),
        })
    }

    /// `bᵀ L† b`, the energy of the electrical flow.
    pub fn flow_energy(&self, net: &Network) -> Result<f64, LaplacianError> {
        let b = net.demand_vector();
        let phi = self.potentials(&b)?;
        Ok(dot(&b, &phi))
    }

    /// `r_e f(e)² / (1 − c_e Reff(e))`: the energy increase caused by deleting `edge`.
    pub fn deletion_increment(&self, potentials: &[f64], edge: EdgeId) -> Result<f64, LaplacianError> {
        if !self.active[edge] {
            return Err(LaplacianError::InactiveEdge(edge));
        }
        if self.is_bridge(edge) {
            return Err(LaplacianError::Bridge(edge));
        }
        let e = &self.edges[edge];
        let f = self.flow_on(potentials, edge);
        Ok(e.resistance * f * f / (1.0 - self.leverage(edge)))
    }

    /// Energy of the electrical flow after deleting `edge`, without deleting it.
    pub fn energy_after_deletion(&self, net: &Network, edge: EdgeId) -> Result<f64, LaplacianError> {
        let b = net.demand_vector();
        let phi = self.potentials(&b)?;
        Ok(dot(&b, &phi) + self.deletion_increment(&phi, edge)?)
    }

    /// Removes a non-bridge edge, updating `L†` by the rank-one formula
    ///
    /// `L'† = L† + c_e (L†χ_e)(L†χ_e)ᵀ / (1 − c_e χ_eᵀ L† χ_e)`.
    pub fn delete_edge(&mut self, edge: EdgeId) -> Result<(), LaplacianError> {
        if edge >= self.edges.len() || !self.active[edge] {
            return Err(LaplacianError::InactiveEdge(edge));
        }
        if self.is_bridge(edge) {
            return Err(LaplacianError::Bridge(edge));
        }
        let Edge { u, v, .. } = self.edges[edge];
        let c = self.edges[edge].conductance();
        let x: DVector<f64> = self.pinv.column(u) - self.pinv.column(v);
        let denom = 1.0 - c * (x[u] - x[v]);
        self.pinv.ger(c / denom, &x, &x, 1.0);
        stamp(&mut self.laplacian, u, v, -c);
        self.active[edge] = false;
        self.active_count -= 1;
        self.deletions_since_refresh += 1;
        if self.deletions_since_refresh >= self.refresh_interval {
            self.refresh()?;
        }
        Ok(())
    }

    /// Recomputes `L†` from `L`.
    pub fn refresh(&mut self) -> Result<(), LaplacianError> {
        self.pinv = pseudoinverse(&self.laplacian)?;
        self.deletions_since_refresh = 0;
        Ok(())
    }
}

fn stamp(l: &mut DMatrix<f64>, u: usize, v: usize, c: f64) {
    l[(u, u)] += c;
    l[(v, v)] += c;
    l[(u, v)] -= c;
    l[(v, u)] -= c;
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Pseudoinverse of a connected graph's Laplacian from its symmetric
/// eigendecomposition, dropping the single zero eigenvalue (eigenvector ∝ 1).
fn pseudoinverse(laplacian: &DMatrix<f64>) -> Result<DMatrix<f64>, LaplacianError> {
    let n = laplacian.nrows();
    if n <= 1 {
        return Ok(DMatrix::zeros(n, n));
    }
    let eig = SymmetricEigen::new(laplacian.clone());
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let top = eig.eigenvalues[idx[n - 1]].abs().max(f64::MIN_POSITIVE);
    // A second (numerically) zero eigenvalue means a second component.
    if eig.eigenvalues[idx[1]] <= top * 1e-13 * n as f64 {
        return Err(LaplacianError::Disconnected);
    }
    let mut scaled = eig.eigenvectors.clone();
    for (col, &lambda) in eig.eigenvalues.iter().enumerate() {
        let w = if col == idx[0] { 0.0 } else { 1.0 / lambda };
        scaled.column_mut(col).scale_mut(w);
    }
    let mut pinv = scaled * eig.eigenvectors.transpose();
    center(&mut pinv);
    Ok(pinv)
}

/// Projects both sides onto the complement of the all-ones vector and
/// symmetrizes.
fn center(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    let row_means: Vec<f64> = (0..n).map(|i| m.row(i).sum() / n as f64).collect();
    let col_means: Vec<f64> = (0..n).map(|j| m.column(j).sum() / n as f64).collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] += grand - row_means[i] - col_means[j];
        }
    }
    let t = m.transpose();
    *m += t;
    *m *= 0.5;
}

/// Electrical flow computed by grounding the root and solving the reduced
/// Laplacian system with a Cholesky factorization restricted to the matrix
/// envelope. Potentials are returned shifted to mean zero, matching `L† b`.
pub fn grounded_electrical_flow(net: &Network) -> Result<FlowAssignment, LaplacianError> {
    let n = net.node_count();
    let root = net.root();
    let b = net.demand_vector();
    let mut phi = vec![0.0; n];
    if n > 1 {
        let index = |x: usize| if x < root { x } else { x - 1 };
        let mut reduced = Skyline::new(n - 1, net.edges().iter().filter(|e| e.u != root && e.v != root).map(|e| (index(e.u), index(e.v))));
        for e in net.edges() {
            let c = e.conductance();
            if e.u != root {
                reduced.add(index(e.u), index(e.u), c);
            }
            if e.v != root {
                reduced.add(index(e.v), index(e.v), c);
            }
            if e.u != root && e.v != root && e.u != e.v {
                reduced.add(index(e.u), index(e.v), -c);
            }
        }
        reduced.factor()?;
        let rhs: Vec<f64> = (0..n).filter(|&x| x != root).map(|x| b[x]).collect();
        let sol = reduced.solve(rhs);
        for x in (0..n).filter(|&x| x != root) {
            phi[x] = sol[index(x)];
        }
        let mean = phi.iter().sum::<f64>() / n as f64;
        phi.iter_mut().for_each(|p| *p -= mean);
    }
    let flow = net
        .edges()
        .iter()
        .map(|e| (phi[e.head()] - phi[e.tail()]) * e.conductance())
        .collect();
    Ok(FlowAssignment {
        flow,
        potentials: Some(phi),
    })
}

/// Symmetric matrix stored row by row from its first nonzero column to the
/// diagonal. Cholesky factorization creates no fill outside that envelope.
struct Skyline {
    first: Vec<usize>,
    rows: Vec<Vec<f64>>,
}

impl Skyline {
    fn new(n: usize, off_diagonal: impl Iterator<Item = (usize, usize)>) -> Self {
        let mut first: Vec<usize> = (0..n).collect();
        for (a, b) in off_diagonal {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            first[hi] = first[hi].min(lo);
        }
        let rows = (0..n).map(|i| vec![0.0; i - first[i] + 1]).collect();
        Self { first, rows }
    }

    fn add(&mut self, i: usize, j: usize, x: f64) {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        self.rows[hi][lo - self.first[hi]] += x;
    }

    /// In-place `A = L Lᵀ`; a non-positive pivot means the grounded graph is
    /// disconnected.
    fn factor(&mut self) -> Result<(), LaplacianError> {
        for i in 0..self.rows.len() {
            let fi = self.first[i];
            for j in fi..=i {
                let fj = self.first[j];
                let lo = fi.max(fj);
                let mut s = self.rows[i][j - fi];
                for k in lo..j {
                    s -= self.rows[i][k - fi] * self.rows[j][k - fj];
                }
                if j < i {
                    s /= self.rows[j][j - fj];
                    self.rows[i][j - fi] = s;
                } else {
                    let scale = self.rows[i][i - fi].abs().max(f64::MIN_POSITIVE);
                    if s <= 1e-12 * scale || !s.is_finite() {
                        return Err(LaplacianError::Disconnected);
                    }
                    self.rows[i][i - fi] = s.sqrt();
                }
            }
        }
        Ok(())
    }

    fn solve(&self, mut x: Vec<f64>) -> Vec<f64> {
        let n = x.len();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.rows[i];
            let s: f64 = (fi..i).map(|k| row[k - fi] * x[k]).sum();
            x[i] = (x[i] - s) / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.rows[i];
            x[i] /= row[i - fi];
            let xi = x[i];
            for k in fi..i {
                x[k] -= row[k - fi] * xi;
            }
        }
        x
    }
}

/// Energy of the electrical flow via the grounded solve.
pub fn grounded_flow_energy(net: &Network) -> Result<f64, LaplacianError> {
    let flow = grounded_electrical_flow(net)?;
    Ok(dot(&net.demand_vector(), flow.potentials.as_ref().unwrap()))
}
