use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use reconf::baselines::{LocalSearchBudget, OracleError, DEFAULT_ENUMERATION_CAP};
use reconf::bench::{
    default_budget, records_csv, run_algorithm, run_benchmark, summarize, summary_text, Algorithm, BenchError,
    BenchInstance, ExperimentConfig,
};
use reconf::bounds::{flow_relaxation_bound, grid_diagonal_bound, GridShape};
use reconf::instances::{generate, GeneratorSpec};
use reconf::lp::export_martin_lp;
use reconf::network::Network;
use reconf::ride::Ride;

/// Spanning-tree reconfiguration of distribution networks.
#[derive(Parser)]
#[command(name = "reconf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Run one algorithm on an instance file.
    Solve(SolveArgs),
    /// Print lower bounds for an instance file.
    Bounds(BoundsArgs),
    /// Run a benchmark and write per-run CSV plus a summary.
    Bench(BenchArgs),
    /// Export the extended spanning-tree MIQP in LP format.
    ExportLp(ExportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    SparsifiedGrid,
    ParallelPaths,
    GridSingleDemand,
    CycleOpposite,
    Triplets,
    FullGridUniform,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum, default_value = "sparsified-grid")]
    family: Family,
    #[arg(long, default_value_t = 15)]
    rows: usize,
    #[arg(long, default_value_t = 15)]
    cols: usize,
    /// Size parameter of the non-grid families (paths, nodes, triplets, side).
    #[arg(long, default_value_t = 8)]
    size: usize,
    #[arg(long, default_value_t = 0.5)]
    d_min: f64,
    #[arg(long, default_value_t = 1.5)]
    d_max: f64,
    #[arg(long, default_value_t = 1.0)]
    r_min: f64,
    #[arg(long, default_value_t = 10.0)]
    r_max: f64,
}

impl FamilyArgs {
    fn spec(&self, p: f64, seed: Option<u64>) -> Result<GeneratorSpec> {
        Ok(match self.family {
            Family::SparsifiedGrid => GeneratorSpec::SparsifiedGrid {
                rows: self.rows,
                cols: self.cols,
                p,
                demands: (self.d_min, self.d_max),
                resistances: (self.r_min, self.r_max),
                seed: seed.context("--seed is required for sparsified grids")?,
            },
            Family::ParallelPaths => GeneratorSpec::ParallelPaths { paths: self.size },
            Family::GridSingleDemand => GeneratorSpec::GridSingleDemand { side: self.size },
            Family::CycleOpposite => GeneratorSpec::CycleOpposite { nodes: self.size },
            Family::Triplets => GeneratorSpec::Triplets { n: self.size },
            Family::FullGridUniform => GeneratorSpec::FullGridUniform {
                rows: self.rows,
                cols: self.cols,
            },
        })
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Sparsification probability.
    #[arg(long, default_value_t = 0.0)]
    p: f64,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BudgetArgs {
    /// Branch exchange move limit.
    #[arg(long)]
    max_iterations: Option<u64>,
    /// Branch exchange time limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Smallest energy decrease branch exchange accepts.
    #[arg(long, default_value_t = 0.0)]
    improvement_threshold: f64,
    /// Refuse enumeration beyond this many spanning trees.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u128,
}

impl BudgetArgs {
    fn budget(&self) -> Result<LocalSearchBudget> {
        let mut b = default_budget();
        if self.max_iterations.is_some() || self.time_limit.is_some() {
            b.max_iterations = self.max_iterations;
            b.time_limit = self.time_limit.map(Duration::try_from_secs_f64).transpose()?;
        }
        b.improvement_threshold = self.improvement_threshold;
        b.validate()?;
        Ok(b)
    }
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(short, long)]
    algorithm: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Grid shape `RxC` for Min-Min; inferred when omitted.
    #[arg(long)]
    grid: Option<String>,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Write the RIDe deletion trace here.
    #[arg(long)]
    trace_out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    instance: PathBuf,
    #[arg(long)]
    grid: Option<String>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Instance files; replaces the generated family when given.
    #[arg(long = "instance", num_args = 1..)]
    files: Vec<PathBuf>,
    /// Sparsification probabilities.
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2")]
    p: Vec<f64>,
    /// Number of generated instances per probability.
    #[arg(long, default_value_t = 30)]
    instances: u64,
    /// First instance seed; instance k uses seed + k.
    #[arg(long, default_value_t = 0)]
    instance_seed: u64,
    #[arg(short, long, value_delimiter = ',', default_value = "dfs,ride,lm")]
    algorithms: Vec<String>,
    /// Seeds for the randomized algorithms.
    #[arg(long, value_delimiter = ',')]
    seeds: Vec<u64>,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Leave time_s empty so the CSV is reproducible byte for byte.
    #[arg(long)]
    no_timing: bool,
    /// CSV output; stdout when absent.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Summary output; stderr when absent.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    instance: PathBuf,
    #[arg(short, long)]
    out: PathBuf,
}

fn read_network(path: &Path) -> Result<Network> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Network::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let (r, c) = s.split_once(['x', 'X']).context("grid shape must look like RxC")?;
    Ok((r.trim().parse()?, c.trim().parse()?))
}

/// Grid shape given on the command line or found by trying every
/// factorization of the node count.
fn grid_shape(net: &Network, given: Option<&str>) -> Result<Option<(usize, usize)>> {
    if let Some(s) = given {
        return Ok(Some(parse_grid(s)?));
    }
    let n = net.node_count();
    Ok((1..=n)
        .filter(|r| n.is_multiple_of(*r))
        .map(|r| (r, n / r))
        .find(|&(rows, cols)| GridShape { rows, cols }.check(net).is_ok()))
}

fn gen(args: &GenArgs) -> Result<()> {
    let spec = args.family.spec(args.p, args.seed)?;
    let net = generate(&spec)?;
    write_or_print(args.out.as_deref(), &(net.to_json() + "\n"))
}

fn solve(args: &SolveArgs) -> Result<()> {
    let net = read_network(&args.instance)?;
    let algorithm: Algorithm = args.algorithm.parse()?;
    if algorithm.is_randomized() && args.seed.is_none() {
        bail!(BenchError::MissingSeed(algorithm));
    }
    let mut inst = BenchInstance::from_network(args.instance.display().to_string(), net);
    inst.grid = grid_shape(&inst.network, args.grid.as_deref())?;
    let sol = run_algorithm(algorithm, &inst, args.seed, &args.budget.budget()?, args.budget.cap)?;
    if let (Some(path), Algorithm::Ride, Some(seed)) = (&args.trace_out, algorithm, args.seed) {
        let trace = Ride::new(&inst.network)?.run(seed)?.trace;
        fs::write(path, trace.to_json()).with_context(|| format!("writing {}", path.display()))?;
    }
    let mut report = format!(
        "{{\n  \"algorithm\": \"{algorithm}\",\n  \"energy\": {},\n  \"edges\": {:?}",
        sol.energy,
        sol.tree.edges()
    );
    if let Some(ex) = &sol.exchange {
        report.push_str(&format!(",\n  \"moves\": {},\n  \"stop\": \"{:?}\"", ex.moves, ex.stop));
    }
    report.push_str("\n}\n");
    print!("{report}");
    Ok(())
}

fn bounds(args: &BoundsArgs) -> Result<()> {
    let net = read_network(&args.instance)?;
    let mut inst = BenchInstance::from_network("", net);
    inst.grid = grid_shape(&inst.network, args.grid.as_deref())?;
    let b = reconf::bench::instance_bounds(&inst);
    println!("flow_relaxation {}", flow_relaxation_bound(&inst.network)?);
    if let Some(cut) = b.cut {
        println!("cut_bound {cut}");
    }
    if let Some((rows, cols)) = inst.grid {
        if let Ok(d) = grid_diagonal_bound(rows, cols, &inst.network) {
            match d.exact_value() {
                Some(q) => println!("grid_diagonal {} ({q})", d.value),
                None => println!("grid_diagonal {}", d.value),
            }
        }
    }
    Ok(())
}

fn bench(args: &BenchArgs) -> Result<()> {
    let algorithms = args
        .algorithms
        .iter()
        .map(|a| a.parse::<Algorithm>())
        .collect::<Result<Vec<_>, _>>()?;
    let instances = if args.files.is_empty() {
        let mut out = Vec::new();
        if matches!(args.family.family, Family::SparsifiedGrid) {
            for &p in &args.p {
                for k in 0..args.instances {
                    out.push(BenchInstance::generated(&args.family.spec(p, Some(args.instance_seed + k))?)?);
                }
            }
        } else {
            out.push(BenchInstance::generated(&args.family.spec(0.0, None)?)?);
        }
        out
    } else {
        args.files
            .iter()
            .map(|f| Ok(BenchInstance::from_network(f.display().to_string(), read_network(f)?)))
            .collect::<Result<_>>()?
    };
    let mut config = ExperimentConfig::new(instances, algorithms, args.seeds.clone());
    config.budget = args.budget.budget()?;
    config.enumeration_cap = args.budget.cap;
    config.timing = !args.no_timing;
    let report = run_benchmark(&config)?;
    write_or_print(args.out.as_deref(), &records_csv(&report.records))?;
    let summary = summary_text(&summarize(&report.records));
    match &args.summary {
        Some(p) => fs::write(p, summary).with_context(|| format!("writing {}", p.display()))?,
        None => eprint!("{summary}"),
    }
    Ok(())
}

fn export_lp(args: &ExportArgs) -> Result<()> {
    let net = read_network(&args.instance)?;
    let counts = export_martin_lp(&net, &args.out).with_context(|| format!("writing {}", args.out.display()))?;
    println!(
        "variables {} (binary {}), rows {}",
        counts.variables(),
        counts.binaries(),
        counts.rows()
    );
    Ok(())
}

fn is_refusal(err: &anyhow::Error) -> bool {
    err.chain().any(|e| {
        e.downcast_ref::<OracleError>().is_some_and(OracleError::is_resource_refusal)
            || matches!(e.downcast_ref::<BenchError>(), Some(BenchError::Oracle(o)) if o.is_resource_refusal())
            || e.downcast_ref::<reconf::Error>().is_some_and(reconf::Error::is_resource_refusal)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve(a),
        Command::Bounds(a) => bounds(a),
        Command::Bench(a) => bench(a),
        Command::ExportLp(a) => export_lp(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_refusal(&e) { 2 } else { 1 })
        }
    }
}
