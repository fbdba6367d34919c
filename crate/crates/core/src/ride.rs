//! Randomized iterative deletion (RIDe).
//!
//! Starting from the whole graph, repeatedly pick a non-bridge edge with
//! probability proportional to `1 − c_e·Reff(e)` and delete it, until
//! `n − 1` edges remain. The expected energy of the resulting tree is at most
//! `m − n + 2` times the energy of the electrical flow on the full graph.
//!
//! Randomness comes from [`ChaCha8Rng`] seeded with `seed_from_u64`, which
//! gives the same stream on every platform. Sampling draws one `f64` in
//! `[0, 1)` per step and inverts the cumulative distribution over edges in
//! index order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laplacian::{LaplacianError, LaplacianState, DEFAULT_REFRESH_INTERVAL};
use crate::network::{EdgeId, Network, NetworkError, RootedTree};

#[derive(Debug, Error)]
pub enum RideError {
    #[error(transparent)]
    Laplacian(#[from] LaplacianError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("the current graph is already a spanning tree")]
    AlreadyTree,
}

/// One deletion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeletionStep {
    pub edge: EdgeId,
    pub probability: f64,
    pub energy_before: f64,
    pub energy_after: f64,
    /// `r_e f(e)² / (1 − c_e Reff(e))`, evaluated before the deletion.
    pub predicted_increment: f64,
}

impl DeletionStep {
    /// Observed increase `energy_after − energy_before`.
    pub fn increment(&self) -> f64 {
        self.energy_after - self.energy_before
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeletionTrace {
    pub seed: u64,
    pub refresh_interval: usize,
    /// Electrical flow energy of the full graph.
    pub initial_energy: f64,
    pub steps: Vec<DeletionStep>,
}

impl DeletionTrace {
    pub fn final_energy(&self) -> f64 {
        self.steps.last().map_or(self.initial_energy, |s| s.energy_after)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Sampling distribution over the active edges of `state`.
///
/// Entries are `(edge, p_e)` in edge order. Bridges get exactly zero; tiny
/// negative values from round-off are clamped and the rest renormalized.
pub fn ride_probabilities(state: &LaplacianState) -> Result<Vec<(EdgeId, f64)>, RideError> {
    let excess = state.active_edge_count() as isize - (state.node_count() as isize - 1);
    if excess <= 0 {
        return Err(RideError::AlreadyTree);
    }
    let mut probs: Vec<(EdgeId, f64)> = state
        .active_edges()
        .map(|e| {
            let p = if state.is_bridge(e) {
                0.0
            } else {
                state.slack(e) / excess as f64
            };
            (e, p)
        })
        .collect();
    let total: f64 = probs.iter().map(|&(_, p)| p).sum();
    if total <= 0.0 {
        return Err(RideError::AlreadyTree);
    }
    for (_, p) in probs.iter_mut() {
        *p /= total;
    }
    Ok(probs)
}

fn sample(probs: &[(EdgeId, f64)], rng: &mut ChaCha8Rng) -> (EdgeId, f64) {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = None;
    for &(e, p) in probs {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = Some((e, p));
        if u < acc {
            return (e, p);
        }
    }
    last.expect("distribution has positive mass")
}

/// Result of one run.
#[derive(Debug, Clone)]
pub struct RideOutcome {
    pub tree: RootedTree,
    pub trace: DeletionTrace,
}

impl RideOutcome {
    pub fn energy(&self) -> f64 {
        self.trace.final_energy()
    }
}

/// A network with its Laplacian state prepared once, so that many seeds can
/// be run without recomputing the initial pseudoinverse.
#[derive(Debug, Clone)]
pub struct Ride<'a> {
    net: &'a Network,
    base: LaplacianState,
    initial_energy: f64,
}

impl<'a> Ride<'a> {
    pub fn new(net: &'a Network) -> Result<Self, RideError> {
        Self::with_refresh(net, DEFAULT_REFRESH_INTERVAL)
    }

    pub fn with_refresh(net: &'a Network, refresh_interval: usize) -> Result<Self, RideError> {
        let base = LaplacianState::build_with_refresh(net, refresh_interval)?;
        let initial_energy = base.flow_energy(net)?;
        Ok(Self {
            net,
            base,
            initial_energy,
        })
    }

    /// Energy of the electrical flow on the full graph.
    pub fn flow_energy(&self) -> f64 {
        self.initial_energy
    }

    pub fn base_state(&self) -> &LaplacianState {
        &self.base
    }

    pub fn run(&self, seed: u64) -> Result<RideOutcome, RideError> {
        self.run_observed(seed, |_, _| {})
    }

    /// Runs with a callback invoked once on the initial state (with `None`)
    /// and then after every deletion with the updated state.
    pub fn run_observed(
        &self,
        seed: u64,
        mut observe: impl FnMut(&LaplacianState, Option<&DeletionStep>),
    ) -> Result<RideOutcome, RideError> {
        let net = self.net;
        let n = net.node_count();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = self.base.clone();
        let b = net.demand_vector();
        let mut energy = self.initial_energy;
        let mut steps = Vec::with_capacity(net.edge_count().saturating_sub(n - 1));
        observe(&state, None);
        while state.active_edge_count() > n - 1 {
            let probs = ride_probabilities(&state)?;
            let (edge, probability) = sample(&probs, &mut rng);
            let phi = state.potentials(&b)?;
            let predicted_increment = state.deletion_increment(&phi, edge)?;
            state.delete_edge(edge)?;
            let energy_after = state.flow_energy(net)?;
            let step = DeletionStep {
                edge,
                probability,
                energy_before: energy,
                energy_after,
                predicted_increment,
            };
            observe(&state, Some(&step));
            energy = energy_after;
            steps.push(step);
        }
        let kept: Vec<EdgeId> = state.active_edges().collect();
        let tree = RootedTree::from_edges(net, &kept)?;
        Ok(RideOutcome {
            tree,
            trace: DeletionTrace {
                seed,
                refresh_interval: state.refresh_interval(),
                initial_energy: self.initial_energy,
                steps,
            },
        })
    }
}

/// One RIDe run on `net`.
pub fn ride(
    net: &Network,
    seed: u64,
    refresh_interval: usize,
) -> Result<(RootedTree, DeletionTrace), RideError> {
    let out = Ride::with_refresh(net, refresh_interval)?.run(seed)?;
    Ok((out.tree, out.trace))
}
