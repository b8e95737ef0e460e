use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nkland::harness::{self, run_moves_trace, run_sweep, ExperimentSpec};
use nkland::{oracle, Algorithm, Landscape, NodeDraw, PuParams, SubunitEval};

use crate::{chart, csvio, CliError};

#[derive(Debug, Parser)]
#[command(name = "nkland", version, about = "NK landscape search experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every algorithm over a K grid and write summary (and records) CSV.
    Sweep(SweepArgs),
    /// Record the mean number of sub-unit improving moves per step of ICTT1.
    Trace(TraceArgs),
    /// Enumerate a small landscape and compare the walkers with its optimum.
    Oracle(OracleArgs),
    /// Render SVG line charts from a summary or trace CSV.
    Chart(ChartArgs),
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: nkland::NkError| e.to_string())
}

fn parse_eval(s: &str) -> Result<SubunitEval, String> {
    s.parse().map_err(|e: nkland::NkError| e.to_string())
}

fn parse_draw(s: &str) -> Result<NodeDraw, String> {
    s.parse().map_err(|e: nkland::NkError| e.to_string())
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |w| w.get())
}

/// Walker settings shared by every subcommand.
#[derive(Debug, Args)]
pub struct WalkerArgs {
    /// PU flip probability.
    #[arg(long, default_value_t = 0.33)]
    pub tau: f64,
    /// PU generations.
    #[arg(long, default_value_t = 500)]
    pub generations: usize,
    /// Sub-unit counts of ICTT1 and ICTT1_ALT.
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [4, 6])]
    pub subunits: Vec<usize>,
    /// Sub-unit evaluation set: inclusive or exclusive of the focal node.
    #[arg(long, value_parser = parse_eval, default_value = "inclusive")]
    pub subunit_eval: SubunitEval,
    /// ICTT node selection: without-replacement or with-replacement.
    #[arg(long, value_parser = parse_draw, default_value = "without-replacement")]
    pub ictt_draw: NodeDraw,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    /// Landscapes per K.
    #[arg(long, default_value_t = 10_000)]
    pub iters: usize,
    #[command(flatten)]
    pub walker: WalkerArgs,
    /// Worker threads (defaults to all cores).
    #[arg(long, default_value_t = default_workers())]
    pub workers: usize,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Also render SVG charts of the written CSV.
    #[arg(long)]
    pub charts: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated K values (default 0..n-1).
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<usize>,
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm, default_value = "cs,pu,ictt1,ictt1_alt")]
    pub algos: Vec<Algorithm>,
    /// Time steps of CS and ICTT.
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    /// Also write the per-replicate records.
    #[arg(long)]
    pub records: bool,
    #[command(flatten)]
    pub exp: ExperimentArgs,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,19")]
    pub k: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[command(flatten)]
    pub exp: ExperimentArgs,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Time steps of CS and ICTT.
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[command(flatten)]
    pub walker: WalkerArgs,
}

#[derive(Debug, Args)]
pub struct ChartArgs {
    /// Summary or trace CSV.
    pub input: PathBuf,
    /// Output directory (defaults to the input's directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn usage(e: nkland::NkError) -> CliError {
    CliError::Usage(e.to_string())
}

fn runtime(e: nkland::NkError) -> CliError {
    CliError::Runtime(e.to_string())
}

fn build_spec(
    n: usize,
    k_values: Vec<usize>,
    algorithms: Vec<Algorithm>,
    iterations: usize,
    max_steps: usize,
    walker: &WalkerArgs,
    workers: usize,
) -> Result<ExperimentSpec, CliError> {
    let spec = ExperimentSpec {
        n,
        k_values,
        algorithms,
        iterations,
        max_steps,
        pu: PuParams::new(walker.tau, walker.generations).map_err(usage)?,
        subunits_ictt1: walker.subunits[0],
        subunits_ictt1_alt: walker.subunits[1],
        master_seed: walker.seed,
        subunit_eval: walker.subunit_eval,
        ictt_node_draw: walker.ictt_draw,
        workers,
    };
    spec.validate().map_err(usage)?;
    Ok(spec)
}

fn prepare_out(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

pub fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let exp = &args.exp;
    let k_values = if args.k.is_empty() {
        (0..exp.n).collect()
    } else {
        args.k.clone()
    };
    let spec = build_spec(
        exp.n,
        k_values,
        args.algos.clone(),
        exp.iters,
        args.steps,
        &exp.walker,
        exp.workers,
    )?;
    let result = run_sweep(&spec).map_err(runtime)?;

    prepare_out(&exp.out)?;
    let summary_path = exp.out.join("summary.csv");
    csvio::write_summary(&summary_path, &result.summary)?;
    println!("wrote {}", summary_path.display());
    if args.records {
        let path = exp.out.join("records.csv");
        csvio::write_records(&path, &result.records)?;
        println!("wrote {}", path.display());
    }
    if exp.charts {
        for p in chart::render_line_chart(&summary_path, &exp.out)? {
            println!("wrote {}", p.display());
        }
    }
    println!(
        "{:<10} {:>3} {:>10} {:>9} {:>8} {:>8}",
        "algorithm", "k", "fitness", "se", "hamming", "steps"
    );
    for r in &result.summary.rows {
        println!(
            "{:<10} {:>3} {:>10.6} {:>9.6} {:>8.3} {:>8.1}",
            r.algorithm.name(),
            r.k,
            r.mean_fitness,
            r.se_fitness,
            r.mean_hamming,
            r.mean_steps
        );
    }
    Ok(())
}

pub fn trace(args: TraceArgs) -> Result<(), CliError> {
    let exp = &args.exp;
    if args.steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let spec = build_spec(
        exp.n,
        args.k.clone(),
        vec![Algorithm::Ictt1],
        exp.iters,
        args.steps,
        &exp.walker,
        exp.workers,
    )?;
    let traces = args
        .k
        .iter()
        .map(|&k| run_moves_trace(&spec, k, args.steps))
        .collect::<Result<Vec<_>, _>>()
        .map_err(runtime)?;

    prepare_out(&exp.out)?;
    let path = exp.out.join("trace.csv");
    csvio::write_trace(&path, &traces)?;
    println!("wrote {}", path.display());
    if exp.charts {
        for p in chart::render_line_chart(&path, &exp.out)? {
            println!("wrote {}", p.display());
        }
    }
    for t in &traces {
        let last = args.steps;
        println!(
            "k={:<3} mean moves at step {last}: {:.3}  runs with none left: {:.1}%",
            t.k,
            t.mean()[last - 1],
            100.0 * t.zero_fraction(last)
        );
    }
    Ok(())
}

pub fn oracle_cmd(args: OracleArgs) -> Result<(), CliError> {
    let spec = build_spec(
        args.n,
        vec![args.k],
        Algorithm::ALL.to_vec(),
        1,
        args.steps,
        &args.walker,
        1,
    )?;
    let landscape = Landscape::generate(args.n, args.k, args.walker.seed).map_err(usage)?;
    let (best, best_fitness) = oracle::enumerate_global_optimum(&landscape).map_err(runtime)?;

    println!(
        "n = {}, k = {}, seed = {}",
        args.n, args.k, args.walker.seed
    );
    println!("configurations examined: {}", 1u64 << args.n);
    println!("global optimum: {best}");
    println!("global optimum fitness: {}", csvio::fmt_num(best_fitness));
    if args.n <= oracle::MAX_LOCAL_OPTIMA_N {
        println!(
            "local optima: {}",
            oracle::count_local_optima(&landscape).map_err(runtime)?
        );
    } else {
        println!(
            "local optima: not counted for n > {}",
            oracle::MAX_LOCAL_OPTIMA_N
        );
    }

    let init = spec.initial_configuration(args.k, 0);
    println!("initial configuration: {init}");
    println!(
        "{:<10} {:>14} {:>8} {:>8} {:>7}",
        "walker", "fitness", "ratio", "hamming", "local"
    );
    for alg in Algorithm::ALL {
        let out = harness::walk(&spec, alg, &landscape, &init, 0).map_err(runtime)?;
        println!(
            "{:<10} {:>14} {:>8.6} {:>8} {:>7}",
            alg.name(),
            csvio::fmt_num(out.best_fitness),
            out.best_fitness / best_fitness,
            out.hamming,
            oracle::is_local_optimum(&landscape, &out.best)
        );
    }
    Ok(())
}

pub fn chart_cmd(args: ChartArgs) -> Result<(), CliError> {
    let out = match args.out {
        Some(dir) => dir,
        None => args
            .input
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from(".")),
    };
    for p in chart::render_line_chart(&args.input, &out)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Trace(a) => trace(a),
        Command::Oracle(a) => oracle_cmd(a),
        Command::Chart(a) => chart_cmd(a),
    }
}
