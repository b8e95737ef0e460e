//! Search walkers on NK landscapes.
//!
//! * [`run_cs`]: centralized search, a single random flip per step kept only
//!   when overall fitness rises.
//! * [`run_pu`]: parallel updating, where each generation every node is a
//!   candidate with probability `tau` and all candidates whose solo flip
//!   would raise overall fitness flip together.
//! * [`run_ictt`]: incremental changes taking turns, where a random flip is
//!   kept when it raises the contribution sum of the focal node's sub-unit,
//!   and the best overall configuration seen so far is committed separately.
//!
//! All comparisons are strict; ties reject. CS and ICTT choose nodes
//! according to [`NodeDraw`].

mod cs;
mod ictt;
mod partition;
mod pu;

pub use cs::run_cs;
pub use ictt::run_ictt;
pub use partition::Partition;
pub use pu::run_pu;

use std::fmt;
use std::str::FromStr;

use crate::error::{param, NkError, Result};
use crate::{Configuration, Landscape};

/// Which nodes of a sub-unit count when scoring a flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SubunitEval {
    /// The whole sub-unit, focal node included.
    #[default]
    Inclusive,
    /// The sub-unit without the focal node.
    Exclusive,
}

impl SubunitEval {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Inclusive => "inclusive",
            Self::Exclusive => "exclusive",
        }
    }
}

impl fmt::Display for SubunitEval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SubunitEval {
    type Err = NkError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inclusive" => Ok(Self::Inclusive),
            "exclusive" => Ok(Self::Exclusive),
            other => param(format!("unknown sub-unit evaluation mode {other:?}")),
        }
    }
}

/// How CS and ICTT choose the node to try in each time step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NodeDraw {
    /// A fresh uniform draw over all nodes every step.
    WithReplacement,
    /// After a rejected flip the next node is drawn uniformly from the nodes
    /// not yet tried since the last kept flip.
    #[default]
    WithoutReplacement,
}

impl NodeDraw {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::WithReplacement => "with-replacement",
            Self::WithoutReplacement => "without-replacement",
        }
    }
}

impl fmt::Display for NodeDraw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NodeDraw {
    type Err = NkError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "with-replacement" => Ok(Self::WithReplacement),
            "without-replacement" => Ok(Self::WithoutReplacement),
            other => param(format!("unknown node draw {other:?}")),
        }
    }
}

/// Per-walk node chooser implementing [`NodeDraw`].
struct NodePicker {
    draw: NodeDraw,
    n: usize,
    untried: Vec<usize>,
}

impl NodePicker {
    fn new(draw: NodeDraw, n: usize) -> Self {
        Self {
            draw,
            n,
            untried: (0..n).collect(),
        }
    }

    fn next<R: rand::Rng + ?Sized>(&mut self, rng: &mut R) -> usize {
        match self.draw {
            NodeDraw::WithReplacement => rng.gen_range(0..self.n),
            NodeDraw::WithoutReplacement => {
                // Walkers stop once no improving node remains, so an improving
                // node is always left among the untried ones.
                debug_assert!(!self.untried.is_empty());
                let i = rng.gen_range(0..self.untried.len());
                self.untried.swap_remove(i)
            }
        }
    }

    /// Marks the configuration as changed: every node is untried again.
    fn reset(&mut self) {
        if self.draw == NodeDraw::WithoutReplacement {
            self.untried.clear();
            self.untried.extend(0..self.n);
        }
    }
}

/// Parallel-updating parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PuParams {
    tau: f64,
    max_generations: usize,
}

impl PuParams {
    pub fn new(tau: f64, max_generations: usize) -> Result<Self> {
        if !(tau > 0.0 && tau < 1.0) {
            return param(format!("tau = {tau} must be in (0, 1)"));
        }
        if max_generations == 0 {
            return param("max_generations must be positive");
        }
        Ok(Self {
            tau,
            max_generations,
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn max_generations(&self) -> usize {
        self.max_generations
    }
}

impl Default for PuParams {
    fn default() -> Self {
        Self {
            tau: 0.33,
            max_generations: 500,
        }
    }
}

/// A kept flip. PU records every node flipped in a generation under the
/// same step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Move {
    pub step: usize,
    pub node: usize,
}

/// Result of one walk.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub initial: Configuration,
    /// Best configuration encountered (the committed one for ICTT).
    pub best: Configuration,
    pub best_fitness: f64,
    /// Configuration the walk stopped at.
    pub terminal: Configuration,
    pub steps_executed: usize,
    pub terminated_early: bool,
    /// Overall fitness of the walked-to configuration after each step.
    pub fitness_trace: Vec<f64>,
    /// Improving moves available after each step (sub-unit improving moves
    /// for ICTT, globally improving moves otherwise).
    pub moves_available_trace: Vec<usize>,
    pub moves: Vec<Move>,
    pub hamming: usize,
}

/// Number of nodes whose solo flip strictly increases overall fitness.
pub fn count_improving_moves_global(landscape: &Landscape, config: &Configuration) -> usize {
    (0..landscape.n())
        .filter(|&p| landscape.flip_delta(config, p) > 0.0)
        .count()
}

/// Change in the evaluation sum of `p`'s sub-unit if `p` alone flipped.
#[inline]
pub fn subunit_flip_delta(
    landscape: &Landscape,
    partition: &Partition,
    mode: SubunitEval,
    config: &Configuration,
    p: usize,
) -> f64 {
    let unit = partition.unit_of(p);
    landscape.flip_delta_filtered(config, p, |q| {
        partition.unit_of(q) == unit && (mode == SubunitEval::Inclusive || q != p)
    })
}

/// Number of nodes whose flip strictly increases the evaluation sum of their
/// own sub-unit.
pub fn count_improving_moves_subunit(
    landscape: &Landscape,
    partition: &Partition,
    mode: SubunitEval,
    config: &Configuration,
) -> usize {
    (0..landscape.n())
        .filter(|&p| subunit_flip_delta(landscape, partition, mode, config, p) > 0.0)
        .count()
}

fn check_init(landscape: &Landscape, init: &Configuration) -> Result<()> {
    if init.len() != landscape.n() {
        return param(format!(
            "initial configuration has {} nodes, landscape has {}",
            init.len(),
            landscape.n()
        ));
    }
    Ok(())
}

/// Accumulates traces and the best configuration during a walk.
struct Recorder {
    initial: Configuration,
    best: Configuration,
    best_fitness: f64,
    fitness_trace: Vec<f64>,
    moves_available_trace: Vec<usize>,
    moves: Vec<Move>,
    terminated_early: bool,
}

impl Recorder {
    fn new(landscape: &Landscape, init: &Configuration, capacity: usize) -> Self {
        Self {
            initial: init.clone(),
            best: init.clone(),
            best_fitness: landscape.configuration_fitness(init),
            fitness_trace: Vec::with_capacity(capacity),
            moves_available_trace: Vec::with_capacity(capacity),
            moves: Vec::new(),
            terminated_early: false,
        }
    }

    /// Current step index (0-based) of the next recorded step.
    fn step_index(&self) -> usize {
        self.fitness_trace.len()
    }

    /// Commits `config` if it strictly beats the best so far.
    fn offer(&mut self, config: &Configuration, fitness: f64) {
        if fitness > self.best_fitness {
            self.best.clone_from(config);
            self.best_fitness = fitness;
        }
    }

    fn record(&mut self, fitness: f64, moves_available: usize) {
        self.fitness_trace.push(fitness);
        self.moves_available_trace.push(moves_available);
    }

    fn finish(self, terminal: Configuration) -> SearchOutcome {
        let hamming =
            crate::hamming_distance(&self.initial, &self.best).expect("walk preserves length");
        SearchOutcome {
            initial: self.initial,
            best: self.best,
            best_fitness: self.best_fitness,
            terminal,
            steps_executed: self.fitness_trace.len(),
            terminated_early: self.terminated_early,
            fitness_trace: self.fitness_trace,
            moves_available_trace: self.moves_available_trace,
            moves: self.moves,
            hamming,
        }
    }
}
