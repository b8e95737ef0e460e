//! Replicated experiments: K sweeps over many random landscapes and the
//! moves-available trace of the four-sub-unit ICTT walker.
//!
//! Every random stream is seeded from `(master_seed, stream, k, replicate)`,
//! so records do not depend on the worker count. For a given `(k, replicate)`
//! all algorithms share the landscape and the initial configuration; each
//! algorithm has its own walk stream (which also draws the ICTT partition).

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;

use crate::error::{param, NkError, Result};
use crate::exec::Execution;
use crate::rng::{derive_seed, WalkRng};
use crate::search::{self, NodeDraw, Partition, PuParams, SearchOutcome, SubunitEval};
use crate::{Configuration, Landscape};

const STREAM_LANDSCAPE: u64 = 0;
const STREAM_INITIAL: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Cs,
    Pu,
    Ictt1,
    Ictt1Alt,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Self::Cs, Self::Pu, Self::Ictt1, Self::Ictt1Alt];

    pub fn name(self) -> &'static str {
        match self {
            Self::Cs => "CS",
            Self::Pu => "PU",
            Self::Ictt1 => "ICTT1",
            Self::Ictt1Alt => "ICTT1_ALT",
        }
    }

    /// Stream tag of the algorithm's walk generator.
    pub fn stream(self) -> u64 {
        2 + self as u64
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = NkError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cs" => Ok(Self::Cs),
            "pu" => Ok(Self::Pu),
            "ictt1" => Ok(Self::Ictt1),
            "ictt1_alt" | "ictt1-alt" => Ok(Self::Ictt1Alt),
            other => param(format!("unknown algorithm {other:?}")),
        }
    }
}

/// Parameters of a replicated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub n: usize,
    pub k_values: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    pub iterations: usize,
    /// Time steps for CS and ICTT.
    pub max_steps: usize,
    pub pu: PuParams,
    pub subunits_ictt1: usize,
    pub subunits_ictt1_alt: usize,
    pub master_seed: u64,
    pub subunit_eval: SubunitEval,
    /// Node selection of the ICTT walkers (CS always draws with replacement).
    pub ictt_node_draw: NodeDraw,
    pub workers: usize,
}

impl Default for ExperimentSpec {
    /// N = 20, K = 0..19, all algorithms, 10,000 landscapes, T = 1000,
    /// tau = 0.33 with 500 generations, 4 and 6 sub-units.
    fn default() -> Self {
        Self {
            n: 20,
            k_values: (0..20).collect(),
            algorithms: Algorithm::ALL.to_vec(),
            iterations: 10_000,
            max_steps: 1000,
            pu: PuParams::default(),
            subunits_ictt1: 4,
            subunits_ictt1_alt: 6,
            master_seed: 1,
            subunit_eval: SubunitEval::Inclusive,
            ictt_node_draw: NodeDraw::WithoutReplacement,
            workers: std::thread::available_parallelism().map_or(1, |w| w.get()),
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return param("n must be positive");
        }
        if self.k_values.is_empty() {
            return param("at least one k is required");
        }
        if let Some(&k) = self.k_values.iter().find(|&&k| k >= self.n) {
            return param(format!("k = {k} must be in [0, {}]", self.n - 1));
        }
        let mut ks = self.k_values.clone();
        ks.sort_unstable();
        ks.dedup();
        if ks.len() != self.k_values.len() {
            return param("k values must be distinct");
        }
        if self.algorithms.is_empty() {
            return param("at least one algorithm is required");
        }
        if self.iterations == 0 {
            return param("iterations must be at least 1");
        }
        if self.max_steps == 0 {
            return param("max_steps must be positive");
        }
        if self.workers == 0 {
            return param("workers must be positive");
        }
        for m in [self.subunits_ictt1, self.subunits_ictt1_alt] {
            if m == 0 || m > self.n {
                return param(format!("sub-unit count {m} must be in [1, {}]", self.n));
            }
        }
        Ok(())
    }

    fn execution(&self) -> Execution {
        Execution::with_workers(self.workers)
    }

    pub fn landscape_seed(&self, k: usize, replicate: usize) -> u64 {
        derive_seed(
            self.master_seed,
            STREAM_LANDSCAPE,
            k as u64,
            replicate as u64,
        )
    }

    pub fn walk_seed(&self, algorithm: Algorithm, k: usize, replicate: usize) -> u64 {
        derive_seed(
            self.master_seed,
            algorithm.stream(),
            k as u64,
            replicate as u64,
        )
    }

    /// Initial configuration shared by all algorithms at `(k, replicate)`.
    pub fn initial_configuration(&self, k: usize, replicate: usize) -> Configuration {
        let seed = derive_seed(self.master_seed, STREAM_INITIAL, k as u64, replicate as u64);
        Configuration::random(self.n, &mut WalkRng::seed_from_u64(seed)).expect("n validated")
    }
}

/// One walk on one landscape.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateRecord {
    pub algorithm: Algorithm,
    pub k: usize,
    pub replicate_index: usize,
    pub best_fitness: f64,
    pub hamming: usize,
    pub steps_executed: usize,
    pub terminated_early: bool,
    /// Seed of the landscape the walk ran on.
    pub seed_used: u64,
}

/// Aggregates for one `(algorithm, k)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algorithm: Algorithm,
    pub k: usize,
    pub mean_fitness: f64,
    pub se_fitness: f64,
    pub mean_hamming: f64,
    pub se_hamming: f64,
    pub mean_steps: f64,
    pub early_term_rate: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepSummary {
    pub rows: Vec<SummaryRow>,
}

impl SweepSummary {
    pub fn row(&self, algorithm: Algorithm, k: usize) -> Option<&SummaryRow> {
        self.rows
            .iter()
            .find(|r| r.algorithm == algorithm && r.k == k)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub summary: SweepSummary,
    /// Sorted by algorithm, then k, then replicate.
    pub records: Vec<ReplicateRecord>,
}

/// Runs `algorithm` on a prepared landscape and initial configuration.
pub fn walk(
    spec: &ExperimentSpec,
    algorithm: Algorithm,
    landscape: &Landscape,
    init: &Configuration,
    replicate: usize,
) -> Result<SearchOutcome> {
    walk_for(spec, algorithm, landscape, init, replicate, spec.max_steps)
}

fn walk_for(
    spec: &ExperimentSpec,
    algorithm: Algorithm,
    landscape: &Landscape,
    init: &Configuration,
    replicate: usize,
    steps: usize,
) -> Result<SearchOutcome> {
    let mut rng = WalkRng::seed_from_u64(spec.walk_seed(algorithm, landscape.k(), replicate));
    let ictt = |m: usize, rng: &mut WalkRng| {
        let partition = Partition::random(landscape.n(), m, rng)?;
        search::run_ictt(
            landscape,
            &partition,
            spec.subunit_eval,
            init,
            steps,
            spec.ictt_node_draw,
            rng,
        )
    };
    match algorithm {
        Algorithm::Cs => {
            search::run_cs(landscape, init, steps, NodeDraw::WithReplacement, &mut rng)
        }
        Algorithm::Pu => search::run_pu(landscape, init, spec.pu, &mut rng),
        Algorithm::Ictt1 => ictt(spec.subunits_ictt1, &mut rng),
        Algorithm::Ictt1Alt => ictt(spec.subunits_ictt1_alt, &mut rng),
    }
}

fn record(
    algorithm: Algorithm,
    k: usize,
    replicate: usize,
    seed: u64,
    out: &SearchOutcome,
) -> ReplicateRecord {
    ReplicateRecord {
        algorithm,
        k,
        replicate_index: replicate,
        best_fitness: out.best_fitness,
        hamming: out.hamming,
        steps_executed: out.steps_executed,
        terminated_early: out.terminated_early,
        seed_used: seed,
    }
}

/// Runs one algorithm on the `(k, replicate)` landscape.
pub fn run_replicate(
    spec: &ExperimentSpec,
    algorithm: Algorithm,
    k: usize,
    replicate: usize,
) -> Result<ReplicateRecord> {
    spec.validate()?;
    let seed = spec.landscape_seed(k, replicate);
    let landscape = Landscape::generate(spec.n, k, seed)?;
    let init = spec.initial_configuration(k, replicate);
    let out = walk(spec, algorithm, &landscape, &init, replicate)?;
    Ok(record(algorithm, k, replicate, seed, &out))
}

fn work_items(spec: &ExperimentSpec) -> Vec<(usize, usize)> {
    spec.k_values
        .iter()
        .flat_map(|&k| (0..spec.iterations).map(move |r| (k, r)))
        .collect()
}

/// Runs every algorithm on `iterations` landscapes for each k.
///
/// Landscapes are generated once per `(k, replicate)` and shared by all
/// algorithms; generation buffers are reused within a worker.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<SweepResult> {
    run_sweep_with(spec, spec.execution())
}

/// [`run_sweep`] with an explicit execution strategy (`spec.workers` ignored).
pub fn run_sweep_with(spec: &ExperimentSpec, exec: Execution) -> Result<SweepResult> {
    spec.validate()?;
    let per_item = exec.map_init(
        &work_items(spec),
        || None::<Landscape>,
        |buffer, &(k, r)| -> Result<Vec<ReplicateRecord>> {
            let seed = spec.landscape_seed(k, r);
            let landscape = match buffer {
                Some(l) => {
                    l.regenerate(spec.n, k, seed)?;
                    l
                }
                None => buffer.insert(Landscape::generate(spec.n, k, seed)?),
            };
            let init = spec.initial_configuration(k, r);
            spec.algorithms
                .iter()
                .map(|&alg| {
                    Ok(record(
                        alg,
                        k,
                        r,
                        seed,
                        &walk(spec, alg, landscape, &init, r)?,
                    ))
                })
                .collect()
        },
    );
    let mut records = Vec::with_capacity(per_item.len() * spec.algorithms.len());
    for item in per_item {
        records.extend(item?);
    }
    records.sort_by_key(|r| (r.algorithm, r.k, r.replicate_index));
    Ok(SweepResult {
        summary: summarize(&records),
        records,
    })
}

/// Mean and standard error (sample standard deviation over sqrt(count)).
/// A single value has standard error 0.
pub fn mean_se(values: &[f64]) -> (f64, f64) {
    let count = values.len() as f64;
    let mean = values.iter().sum::<f64>() / count;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1.0);
    (mean, (var / count).sqrt())
}

/// Aggregates records into one row per `(algorithm, k)`, sorted.
pub fn summarize(records: &[ReplicateRecord]) -> SweepSummary {
    let mut sorted: Vec<&ReplicateRecord> = records.iter().collect();
    sorted.sort_by_key(|r| (r.algorithm, r.k, r.replicate_index));
    let rows = sorted
        .chunk_by(|a, b| a.algorithm == b.algorithm && a.k == b.k)
        .map(|group| {
            let fit: Vec<f64> = group.iter().map(|r| r.best_fitness).collect();
            let ham: Vec<f64> = group.iter().map(|r| r.hamming as f64).collect();
            let (mean_fitness, se_fitness) = mean_se(&fit);
            let (mean_hamming, se_hamming) = mean_se(&ham);
            let count = group.len() as f64;
            SummaryRow {
                algorithm: group[0].algorithm,
                k: group[0].k,
                mean_fitness,
                se_fitness,
                mean_hamming,
                se_hamming,
                mean_steps: group.iter().map(|r| r.steps_executed as f64).sum::<f64>() / count,
                early_term_rate: group.iter().filter(|r| r.terminated_early).count() as f64 / count,
                iterations: group.len(),
            }
        })
        .collect();
    SweepSummary { rows }
}

/// Per-replicate moves-available traces of ICTT1 at one k.
#[derive(Debug, Clone, PartialEq)]
pub struct MovesTrace {
    pub k: usize,
    /// One row per replicate, `steps` entries each; steps after an early stop hold 0.
    pub replicates: Vec<Vec<usize>>,
}

impl MovesTrace {
    pub fn steps(&self) -> usize {
        self.replicates.first().map_or(0, Vec::len)
    }

    /// Mean moves available after each step.
    pub fn mean(&self) -> Vec<f64> {
        let count = self.replicates.len() as f64;
        (0..self.steps())
            .map(|t| self.replicates.iter().map(|r| r[t] as f64).sum::<f64>() / count)
            .collect()
    }

    /// Fraction of replicates with no move available after step `t` (1-based).
    pub fn zero_fraction(&self, t: usize) -> f64 {
        let zeros = self.replicates.iter().filter(|r| r[t - 1] == 0).count();
        zeros as f64 / self.replicates.len() as f64
    }
}

/// Runs ICTT1 for `steps` steps on `iterations` landscapes at `k`.
pub fn run_moves_trace(spec: &ExperimentSpec, k: usize, steps: usize) -> Result<MovesTrace> {
    run_moves_trace_on(spec, k, steps, |l, n, k, seed| l.regenerate(n, k, seed))
}

/// [`run_moves_trace`] with a custom landscape source: `fill` rebuilds the
/// buffer for `(n, k, seed)`.
pub fn run_moves_trace_on<F>(
    spec: &ExperimentSpec,
    k: usize,
    steps: usize,
    fill: F,
) -> Result<MovesTrace>
where
    F: Fn(&mut Landscape, usize, usize, u64) -> Result<()> + Sync + Send,
{
    spec.validate()?;
    if steps == 0 {
        return param("steps must be at least 1");
    }
    if k >= spec.n {
        return param(format!("k = {k} must be in [0, {}]", spec.n - 1));
    }
    let replicates: Vec<usize> = (0..spec.iterations).collect();
    let rows = spec.execution().map_init(
        &replicates,
        || None::<Landscape>,
        |buffer, &r| -> Result<Vec<usize>> {
            let seed = spec.landscape_seed(k, r);
            let landscape = match buffer {
                Some(l) => l,
                None => buffer.insert(Landscape::generate(1, 0, 0)?),
            };
            fill(landscape, spec.n, k, seed)?;
            let init = spec.initial_configuration(k, r);
            let out = walk_for(spec, Algorithm::Ictt1, landscape, &init, r, steps)?;
            let mut trace = out.moves_available_trace;
            trace.resize(steps, 0);
            Ok(trace)
        },
    );
    Ok(MovesTrace {
        k,
        replicates: rows.into_iter().collect::<Result<_>>()?,
    })
}
