//! Brute-force ground truth for small landscapes.
//!
//! Fitness is recomputed here without touching the lookup code in
//! [`crate::landscape`]: [`naive_fitness`] builds each row address by
//! concatenating dependency states into a string and parsing it as binary,
//! and the enumeration paths use their own positional arithmetic over a
//! configuration index.

use crate::error::{NkError, Result};
use crate::exec::Execution;
use crate::{Configuration, Landscape};

/// Largest `n` accepted by [`enumerate_global_optimum`].
pub const MAX_ENUMERATION_N: usize = 24;
/// Largest `n` accepted by [`count_local_optima`].
pub const MAX_LOCAL_OPTIMA_N: usize = 20;

/// Global optimum and number of local optima of one landscape.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub global_best: Configuration,
    pub global_best_fitness: f64,
    pub num_local_optima: usize,
}

/// Fitness recomputed from the matrix with string-built row addresses.
pub fn naive_fitness(landscape: &Landscape, config: &Configuration) -> f64 {
    let n = landscape.n();
    let k = landscape.k();
    let mut total = 0.0;
    for p in 0..n {
        let digits: String = landscape
            .deps(p)
            .iter()
            .map(|&d| if config.bit(d) == 1 { '1' } else { '0' })
            .collect();
        let decimal = if digits.is_empty() {
            0
        } else {
            usize::from_str_radix(&digits, 2).expect("binary digits")
        };
        let mut row = 1 + decimal;
        if config.bit(p) == 1 {
            row += 2usize.pow(k as u32);
        }
        total += landscape.matrix()[(row - 1) * n + p];
    }
    total / n as f64
}

/// Configuration whose bit string, read with node 0 as the most significant
/// bit, equals `index`.
pub fn config_from_index(n: usize, index: u64) -> Configuration {
    Configuration::from_bits((0..n).map(|p| ((index >> (n - 1 - p)) & 1) as u8).collect())
        .expect("n >= 1")
}

pub fn index_of(config: &Configuration) -> u64 {
    config
        .bits()
        .iter()
        .fold(0, |acc, &b| (acc << 1) | u64::from(b))
}

/// Fitness of the configuration encoded by `index` (node 0 = MSB).
fn indexed_fitness(landscape: &Landscape, index: u64) -> f64 {
    let n = landscape.n();
    let k = landscape.k();
    let state = |node: usize| ((index >> (n - 1 - node)) & 1) as usize;
    let mut total = 0.0;
    for p in 0..n {
        let mut row = state(p) * (1 << k);
        for (j, &d) in landscape.deps(p).iter().enumerate() {
            row += state(d) * (1 << (k - 1 - j));
        }
        total += landscape.matrix()[row * n + p];
    }
    total / n as f64
}

fn check_size(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(NkError::Capacity(format!(
            "enumeration of 2^{n} configurations exceeds the 2^{limit} limit"
        )));
    }
    Ok(())
}

/// Block ranges of configuration indices handed to workers.
fn blocks(n: usize) -> Vec<(u64, u64)> {
    let total = 1u64 << n;
    let count = 1u64 << n.min(8);
    let len = total / count;
    (0..count).map(|b| (b * len, (b + 1) * len)).collect()
}

/// Exhaustive maximum over all `2^n` configurations. Ties go to the
/// configuration with the smallest binary value (node 0 most significant).
pub fn enumerate_global_optimum(landscape: &Landscape) -> Result<(Configuration, f64)> {
    let n = landscape.n();
    check_size(n, MAX_ENUMERATION_N)?;
    let partial = Execution::auto().map(&blocks(n), |&(lo, hi)| {
        let mut best = (lo, indexed_fitness(landscape, lo));
        for i in lo + 1..hi {
            let f = indexed_fitness(landscape, i);
            if f > best.1 {
                best = (i, f);
            }
        }
        best
    });
    let (index, fitness) = partial
        .into_iter()
        .reduce(|a, b| if b.1 > a.1 { b } else { a })
        .expect("at least one block");
    Ok((config_from_index(n, index), fitness))
}

/// True iff no single flip strictly increases fitness.
pub fn is_local_optimum(landscape: &Landscape, config: &Configuration) -> bool {
    let here = naive_fitness(landscape, config);
    (0..landscape.n()).all(|p| naive_fitness(landscape, &config.flipped(p)) <= here)
}

/// Fitness of every configuration, indexed by its binary value.
pub fn fitness_table(landscape: &Landscape) -> Result<Vec<f64>> {
    let n = landscape.n();
    check_size(n, MAX_LOCAL_OPTIMA_N)?;
    Ok(Execution::auto()
        .map(&blocks(n), |&(lo, hi)| {
            (lo..hi)
                .map(|i| indexed_fitness(landscape, i))
                .collect::<Vec<_>>()
        })
        .concat())
}

/// Number of configurations that are local optima under strict improvement.
pub fn count_local_optima(landscape: &Landscape) -> Result<usize> {
    let n = landscape.n();
    let table = fitness_table(landscape)?;
    let counts = Execution::auto().map(&blocks(n), |&(lo, hi)| {
        (lo..hi)
            .filter(|&i| {
                let f = table[i as usize];
                (0..n).all(|b| table[(i ^ (1 << b)) as usize] <= f)
            })
            .count()
    });
    Ok(counts.into_iter().sum())
}

/// Global optimum and local-optimum count (requires `n <= 20`).
pub fn report(landscape: &Landscape) -> Result<OracleReport> {
    check_size(landscape.n(), MAX_LOCAL_OPTIMA_N)?;
    let (global_best, global_best_fitness) = enumerate_global_optimum(landscape)?;
    Ok(OracleReport {
        global_best,
        global_best_fitness,
        num_local_optima: count_local_optima(landscape)?,
    })
}

/// The best configuration of a `k = 0` landscape, choosing each node's
/// better state independently (ties to 0).
pub fn separable_optimum(landscape: &Landscape) -> Option<Configuration> {
    if landscape.k() != 0 {
        return None;
    }
    let n = landscape.n();
    let m = landscape.matrix();
    Configuration::from_bits((0..n).map(|p| u8::from(m[n + p] > m[p])).collect()).ok()
}
