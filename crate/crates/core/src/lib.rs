//! NK fitness landscapes and local-search walkers.
//!
//! * [`landscape`]: instance generation and fitness evaluation
//! * [`search`]: centralized search, parallel updating and ICTT walkers
//! * [`oracle`]: exhaustive ground truth for small `n`
//! * [`harness`]: seeded K sweeps and moves-available traces
//!
//! With the default `parallel` feature, replicates are distributed over a
//! rayon pool; without it everything runs on the calling thread. Results are
//! identical either way.

mod configuration;
mod error;
pub mod exec;
pub mod harness;
pub mod landscape;
pub mod oracle;
pub mod rng;
pub mod search;

pub use configuration::{hamming_distance, Configuration};
pub use error::{NkError, Result};
pub use harness::{
    Algorithm, ExperimentSpec, ReplicateRecord, SummaryRow, SweepResult, SweepSummary,
};
pub use landscape::Landscape;
pub use search::{NodeDraw, Partition, PuParams, SearchOutcome, SubunitEval};
