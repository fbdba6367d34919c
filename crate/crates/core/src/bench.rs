//! Experiment harness: runs algorithms over instances and seeds, records
//! energies, bounds, gaps and timings, and summarizes them.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::baselines::{
    branch_exchange, brute_force_opt, dfs_tree, ExchangeOutcome, LocalSearchBudget, OracleError,
    DEFAULT_ENUMERATION_CAP,
};
use crate::bounds::{cut_lower_bound, flow_relaxation_bound, grid_diagonal_bound, shortest_path_tree, BoundError, CutFamily};
use crate::instances::{generate, GeneratorSpec, InstanceError};
use crate::lm::{bfs_layers, lm_heuristic, LmError};
use crate::minmin::{minmin, MinMinError};
use crate::network::{tree_energy, Network, NetworkError, RootedTree};
use crate::ride::{Ride, RideError};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("no algorithms selected")]
    NoAlgorithms,
    #[error("no instances selected")]
    NoInstances,
    #[error("{0} is randomized and needs at least one seed")]
    MissingSeed(Algorithm),
    #[error("{0} needs a full grid instance")]
    NeedsGrid(Algorithm),
    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Ride(#[from] RideError),
    #[error(transparent)]
    Lm(#[from] LmError),
    #[error(transparent)]
    MinMin(#[from] MinMinError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// Starting tree for branch exchange.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Start {
    Dfs,
    Spt,
    Ride,
    Lm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Dfs,
    Spt,
    Ride,
    MinMin,
    Lm,
    BranchExchange(Start),
    BruteForce,
}

impl Algorithm {
    /// Whether the output depends on the seed.
    pub fn is_randomized(self) -> bool {
        matches!(
            self,
            Self::Dfs | Self::Ride | Self::BranchExchange(Start::Dfs) | Self::BranchExchange(Start::Ride)
        )
    }
}

impl fmt::Display for Start {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Dfs => "dfs",
            Self::Spt => "spt",
            Self::Ride => "ride",
            Self::Lm => "lm",
        })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Dfs => f.write_str("dfs"),
            Self::Spt => f.write_str("spt"),
            Self::Ride => f.write_str("ride"),
            Self::MinMin => f.write_str("minmin"),
            Self::Lm => f.write_str("lm"),
            Self::BranchExchange(s) => write!(f, "branch_exchange({s})"),
            Self::BruteForce => f.write_str("brute_force"),
        }
    }
}

impl FromStr for Start {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dfs" => Ok(Self::Dfs),
            "spt" => Ok(Self::Spt),
            "ride" => Ok(Self::Ride),
            "lm" => Ok(Self::Lm),
            other => Err(BenchError::UnknownAlgorithm(other.to_string())),
        }
    }
}

/// Accepts the display names, plus `branch_exchange` (from DFS) and the
/// short form `be:<start>`.
impl FromStr for Algorithm {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        let unknown = || BenchError::UnknownAlgorithm(s.clone());
        Ok(match s.as_str() {
            "dfs" => Self::Dfs,
            "spt" => Self::Spt,
            "ride" => Self::Ride,
            "minmin" | "min-min" => Self::MinMin,
            "lm" => Self::Lm,
            "brute_force" | "brute-force" => Self::BruteForce,
            "branch_exchange" | "branch-exchange" | "be" => Self::BranchExchange(Start::Dfs),
            other => {
                let start = other
                    .strip_prefix("be:")
                    .or_else(|| other.strip_prefix("branch_exchange(").and_then(|r| r.strip_suffix(')')))
                    .ok_or_else(unknown)?;
                Self::BranchExchange(start.parse().map_err(|_| unknown())?)
            }
        })
    }
}

/// A network together with the metadata reports group by.
#[derive(Debug, Clone)]
pub struct BenchInstance {
    pub id: String,
    pub family: String,
    pub p: f64,
    /// `(rows, cols)` when the network is a full grid.
    pub grid: Option<(usize, usize)>,
    pub network: Network,
}

impl BenchInstance {
    pub fn generated(spec: &GeneratorSpec) -> Result<Self, InstanceError> {
        let network = generate(spec)?;
        let full_grid = match spec {
            GeneratorSpec::SparsifiedGrid { p, .. } => *p == 0.0,
            _ => true,
        };
        Ok(Self {
            id: spec.label(),
            family: spec.family().to_string(),
            p: spec.p(),
            grid: spec.grid_shape().filter(|_| full_grid),
            network,
        })
    }

    pub fn from_network(id: impl Into<String>, network: Network) -> Self {
        Self {
            id: id.into(),
            family: "file".to_string(),
            p: 0.0,
            grid: None,
            network,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub instances: Vec<BenchInstance>,
    pub algorithms: Vec<Algorithm>,
    pub seeds: Vec<u64>,
    pub budget: LocalSearchBudget,
    pub enumeration_cap: u128,
    /// Record wall times; off makes the CSV byte-stable.
    pub timing: bool,
    /// Run every timed job once untimed first.
    pub warmup: bool,
}

impl ExperimentConfig {
    pub fn new(instances: Vec<BenchInstance>, algorithms: Vec<Algorithm>, seeds: Vec<u64>) -> Self {
        Self {
            instances,
            algorithms,
            seeds,
            budget: default_budget(),
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            timing: true,
            warmup: true,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.algorithms.is_empty() {
            return Err(BenchError::NoAlgorithms);
        }
        if self.instances.is_empty() {
            return Err(BenchError::NoInstances);
        }
        if self.seeds.is_empty() {
            if let Some(&a) = self.algorithms.iter().find(|a| a.is_randomized()) {
                return Err(BenchError::MissingSeed(a));
            }
        }
        self.budget.validate()?;
        Ok(())
    }
}

/// Local search budget used when none is given.
pub fn default_budget() -> LocalSearchBudget {
    LocalSearchBudget {
        max_iterations: Some(100_000),
        time_limit: Some(std::time::Duration::from_secs(60)),
        improvement_threshold: 0.0,
        target_energy: None,
    }
}

/// A tree produced by one algorithm run.
#[derive(Debug, Clone)]
pub struct Solution {
    pub tree: RootedTree,
    pub energy: f64,
    /// Present for branch exchange.
    pub exchange: Option<ExchangeOutcome>,
}

fn start_tree(start: Start, inst: &BenchInstance, seed: Option<u64>) -> Result<RootedTree, BenchError> {
    let net = &inst.network;
    let seed_for = |a| seed.ok_or(BenchError::MissingSeed(a));
    Ok(match start {
        Start::Dfs => dfs_tree(net, seed_for(Algorithm::Dfs)?)?,
        Start::Spt => shortest_path_tree(net)?,
        Start::Ride => Ride::new(net)?.run(seed_for(Algorithm::Ride)?)?.tree,
        Start::Lm => lm_heuristic(net)?,
    })
}

/// Runs one algorithm on one instance.
pub fn run_algorithm(
    algorithm: Algorithm,
    inst: &BenchInstance,
    seed: Option<u64>,
    budget: &LocalSearchBudget,
    enumeration_cap: u128,
) -> Result<Solution, BenchError> {
    let net = &inst.network;
    let mut exchange = None;
    let tree = match algorithm {
        Algorithm::Dfs => start_tree(Start::Dfs, inst, seed)?,
        Algorithm::Spt => start_tree(Start::Spt, inst, seed)?,
        Algorithm::Ride => start_tree(Start::Ride, inst, seed)?,
        Algorithm::Lm => start_tree(Start::Lm, inst, seed)?,
        Algorithm::MinMin => {
            let (rows, cols) = inst.grid.ok_or(BenchError::NeedsGrid(algorithm))?;
            minmin(rows, cols, net)?
        }
        Algorithm::BranchExchange(start) => {
            let first = start_tree(start, inst, seed)?;
            let out = branch_exchange(net, &first, budget)?;
            let tree = out.tree.clone();
            exchange = Some(out);
            tree
        }
        Algorithm::BruteForce => brute_force_opt(net, enumeration_cap)?.0,
    };
    let energy = tree_energy(net, &tree)?;
    Ok(Solution { tree, energy, exchange })
}

/// Lower bounds computed once per instance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct InstanceBounds {
    pub relax: Option<f64>,
    /// Best applicable cut bound: hop-layer cuts always, diagonal cuts on
    /// uniform full grids.
    pub cut: Option<f64>,
}

pub fn instance_bounds(inst: &BenchInstance) -> InstanceBounds {
    let net = &inst.network;
    let relax = flow_relaxation_bound(net).ok();
    let layered = bfs_layers(net).ok().and_then(|part| {
        let mut inside = Vec::new();
        let cuts: Vec<Vec<usize>> = part.layers[..part.layers.len().saturating_sub(1)]
            .iter()
            .map(|layer| {
                inside.extend_from_slice(layer);
                inside.clone()
            })
            .collect();
        CutFamily::new(net, cuts).ok().and_then(|f| cut_lower_bound(net, &f).ok())
    });
    let diagonal = inst
        .grid
        .and_then(|(rows, cols)| grid_diagonal_bound(rows, cols, net).ok())
        .map(|b| b.value);
    let cut = match (layered, diagonal) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
    InstanceBounds { relax, cut }
}

/// One `(instance, algorithm, seed)` result.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub instance: String,
    pub family: String,
    pub p: f64,
    pub algorithm: String,
    pub seed: Option<u64>,
    pub energy: Option<f64>,
    pub relax_bound: Option<f64>,
    pub cut_bound: Option<f64>,
    pub gap: Option<f64>,
    pub time_s: Option<f64>,
    pub error: Option<String>,
    /// Energy after every accepted move, for branch exchange.
    #[serde(skip)]
    pub trajectory: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub records: Vec<ResultRecord>,
}

struct Job<'a> {
    inst: &'a BenchInstance,
    bounds: InstanceBounds,
    algorithm: Algorithm,
    seed: Option<u64>,
}

/// Runs every `(instance, algorithm, seed)` combination in parallel.
/// Deterministic algorithms run once per instance with no seed. Failures
/// are recorded in the row.
pub fn run_benchmark(config: &ExperimentConfig) -> Result<BenchReport, BenchError> {
    config.validate()?;
    let bounds: Vec<InstanceBounds> = config.instances.par_iter().map(instance_bounds).collect();
    let mut jobs = Vec::new();
    for (inst, &b) in config.instances.iter().zip(&bounds) {
        for &algorithm in &config.algorithms {
            let seeds: Vec<Option<u64>> = if algorithm.is_randomized() {
                config.seeds.iter().map(|&s| Some(s)).collect()
            } else {
                vec![None]
            };
            for seed in seeds {
                jobs.push(Job {
                    inst,
                    bounds: b,
                    algorithm,
                    seed,
                });
            }
        }
    }
    let mut records: Vec<ResultRecord> = jobs.par_iter().map(|job| run_job(config, job)).collect();
    fill_gaps(&mut records);
    Ok(BenchReport { records })
}

fn run_job(config: &ExperimentConfig, job: &Job<'_>) -> ResultRecord {
    let run = || run_algorithm(job.algorithm, job.inst, job.seed, &config.budget, config.enumeration_cap);
    if config.timing && config.warmup {
        let _ = run();
    }
    let clock = Instant::now();
    let result = run();
    let elapsed = clock.elapsed().as_secs_f64();
    let mut record = ResultRecord {
        instance: job.inst.id.clone(),
        family: job.inst.family.clone(),
        p: job.inst.p,
        algorithm: job.algorithm.to_string(),
        seed: job.seed,
        energy: None,
        relax_bound: job.bounds.relax,
        cut_bound: job.bounds.cut,
        gap: None,
        time_s: config.timing.then_some(elapsed),
        error: None,
        trajectory: Vec::new(),
    };
    match result {
        Ok(sol) => {
            record.energy = Some(sol.energy);
            if let Some(ex) = sol.exchange {
                record.trajectory = ex.history.iter().map(|&(_, e)| e).collect();
            }
        }
        Err(e) => record.error = Some(e.to_string()),
    }
    record
}

/// Sets each gap against the best energy found for the same instance.
pub fn fill_gaps(records: &mut [ResultRecord]) {
    let mut best: Vec<(String, f64)> = Vec::new();
    for r in records.iter() {
        let Some(e) = r.energy else { continue };
        match best.iter_mut().find(|(id, _)| *id == r.instance) {
            Some((_, b)) => *b = b.min(e),
            None => best.push((r.instance.clone(), e)),
        }
    }
    for r in records.iter_mut() {
        let b = best.iter().find(|(id, _)| *id == r.instance).map(|&(_, b)| b);
        r.gap = match (r.energy, b) {
            (Some(e), Some(b)) if b > 0.0 => Some((e - b) / b),
            (Some(_), Some(_)) => Some(0.0),
            _ => None,
        };
    }
}

fn cell<T: fmt::Display>(x: Option<T>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

/// CSV with columns `instance, algorithm, seed, energy, relax_bound,
/// cut_bound, gap, time_s`. Missing values are empty cells.
pub fn records_csv(records: &[ResultRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["instance", "algorithm", "seed", "energy", "relax_bound", "cut_bound", "gap", "time_s"])
        .expect("writing to memory cannot fail");
    for r in records {
        w.write_record([
            r.instance.clone(),
            r.algorithm.clone(),
            cell(r.seed),
            cell(r.energy),
            cell(r.relax_bound),
            cell(r.cut_bound),
            cell(r.gap),
            cell(r.time_s),
        ])
        .expect("writing to memory cannot fail");
    }
    String::from_utf8(w.into_inner().expect("writing to memory cannot fail")).expect("csv output is UTF-8")
}

/// Mean and 95% half-width of one `(family, p, algorithm)` group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub family: String,
    pub p: f64,
    pub algorithm: String,
    pub runs: usize,
    pub failures: usize,
    pub mean_energy: f64,
    pub mean_gap: f64,
    pub gap_half_width: f64,
    pub mean_time: Option<f64>,
    pub time_half_width: Option<f64>,
}

/// Mean and normal-approximation 95% half-width `1.96·s/√k`.
pub fn mean_half_width(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / k;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, 1.96 * (var / k).sqrt())
}

/// Groups successful records by `(family, p, algorithm)` in order of first
/// appearance. Groups without a successful run are left out.
pub fn summarize(records: &[ResultRecord]) -> Vec<SummaryRow> {
    let mut keys: Vec<(String, f64, String)> = Vec::new();
    for r in records {
        let key = (r.family.clone(), r.p, r.algorithm.clone());
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .filter_map(|(family, p, algorithm)| {
            let group: Vec<&ResultRecord> = records
                .iter()
                .filter(|r| r.family == family && r.p == p && r.algorithm == algorithm)
                .collect();
            let ok: Vec<&&ResultRecord> = group.iter().filter(|r| r.energy.is_some()).collect();
            if ok.is_empty() {
                return None;
            }
            let energies: Vec<f64> = ok.iter().filter_map(|r| r.energy).collect();
            let gaps: Vec<f64> = ok.iter().filter_map(|r| r.gap).collect();
            let times: Vec<f64> = ok.iter().filter_map(|r| r.time_s).collect();
            let (mean_gap, gap_half_width) = mean_half_width(&gaps);
            let (mean_time, time_half_width) = if times.is_empty() {
                (None, None)
            } else {
                let (m, h) = mean_half_width(&times);
                (Some(m), Some(h))
            };
            Some(SummaryRow {
                family,
                p,
                algorithm,
                runs: ok.len(),
                failures: group.len() - ok.len(),
                mean_energy: energies.iter().sum::<f64>() / energies.len() as f64,
                mean_gap,
                gap_half_width,
                mean_time,
                time_half_width,
            })
        })
        .collect()
}

/// Plain-text summary table.
pub fn summary_text(rows: &[SummaryRow]) -> String {
    let mut out = format!(
        "{:<20} {:>6} {:<22} {:>5} {:>14} {:>18} {:>20}\n",
        "family", "p", "algorithm", "runs", "mean energy", "gap % (±95%)", "time s (±95%)"
    );
    for r in rows {
        let time = match (r.mean_time, r.time_half_width) {
            (Some(m), Some(h)) => format!("{m:.4} ± {h:.4}"),
            _ => "-".to_string(),
        };
        out.push_str(&format!(
            "{:<20} {:>6} {:<22} {:>5} {:>14.4} {:>18} {:>20}\n",
            r.family,
            r.p,
            r.algorithm,
            r.runs,
            r.mean_energy,
            format!("{:.2} ± {:.2}", 100.0 * r.mean_gap, 100.0 * r.gap_half_width),
            time
        ));
        if r.failures > 0 {
            out.push_str(&format!("  ({} failed runs)\n", r.failures));
        }
    }
    out
}
