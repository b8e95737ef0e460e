//! NK landscape instances: dependency map, fitness matrix and fitness lookups.
//!
//! The fitness matrix has `2^(k+1)` rows and `n` columns and is stored
//! row-major. The contribution of node `p` is read from column `p`; the upper
//! `2^k` rows apply when `p` is 0, the lower `2^k` rows when `p` is 1, and the
//! row within a half is the binary number formed by the states of `p`'s
//! dependencies in ascending node order, most significant bit first.

use rand::seq::index;
use rand::{Rng, SeedableRng};

use crate::error::{param, NkError, Result};
use crate::rng::WalkRng;
use crate::Configuration;

/// Largest supported `k + 1` (the matrix has `2^(k+1)` rows).
pub const MAX_ROW_BITS: usize = 30;

/// Upper bound on materialized matrix entries (about 32 GiB of f64).
const MAX_ENTRIES: usize = 1 << 32;

/// A random NK problem instance. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Landscape {
    n: usize,
    k: usize,
    seed: Option<u64>,
    deps: Vec<Vec<usize>>,
    matrix: Vec<f64>,
    /// For each node `p`, the nodes whose row index changes when `p` flips,
    /// paired with the xor mask applied to that row index. `p` itself is first.
    effects: Vec<Vec<(usize, usize)>>,
}

impl Landscape {
    /// Generates the instance pinned by `(n, k, seed)`.
    ///
    /// All `2^(k+1) * n` matrix entries are drawn first in row-major order,
    /// then each node's `k` dependencies in node order, sampled without
    /// replacement from the other `n - 1` nodes.
    pub fn generate(n: usize, k: usize, seed: u64) -> Result<Self> {
        let mut l = Self::empty();
        l.regenerate(n, k, seed)?;
        Ok(l)
    }

    /// Rebuilds `self` as the instance for `(n, k, seed)`, reusing its buffers.
    pub fn regenerate(&mut self, n: usize, k: usize, seed: u64) -> Result<()> {
        let rows = check_shape(n, k)?;
        let mut rng = WalkRng::seed_from_u64(seed);

        self.matrix.clear();
        self.matrix.reserve(rows * n);
        self.matrix.extend((0..rows * n).map(|_| rng.gen::<f64>()));

        self.deps.resize_with(n, Vec::new);
        for (p, row) in self.deps.iter_mut().enumerate() {
            row.clear();
            row.extend(index::sample(&mut rng, n - 1, k).into_iter().map(|i| {
                if i >= p {
                    i + 1
                } else {
                    i
                }
            }));
            row.sort_unstable();
        }

        self.n = n;
        self.k = k;
        self.seed = Some(seed);
        self.rebuild_effects();
        Ok(())
    }

    /// Builds an instance from an explicit dependency map and row-major matrix.
    pub fn from_parts(n: usize, k: usize, deps: Vec<Vec<usize>>, matrix: Vec<f64>) -> Result<Self> {
        let rows = check_shape(n, k)?;
        if deps.len() != n {
            return param(format!("expected {n} dependency rows, got {}", deps.len()));
        }
        for (p, row) in deps.iter().enumerate() {
            if row.len() != k {
                return param(format!(
                    "node {p} has {} dependencies, expected {k}",
                    row.len()
                ));
            }
            if row.iter().any(|&q| q >= n || q == p) {
                return param(format!("node {p} has an invalid dependency"));
            }
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return param(format!(
                    "dependencies of node {p} are not strictly ascending"
                ));
            }
        }
        if matrix.len() != rows * n {
            return param(format!(
                "matrix has {} entries, expected {rows} x {n}",
                matrix.len()
            ));
        }
        if matrix.iter().any(|v| !(0.0..1.0).contains(v)) {
            return param("matrix entries must lie in [0, 1)");
        }
        let mut l = Self {
            n,
            k,
            seed: None,
            deps,
            matrix,
            effects: Vec::new(),
        };
        l.rebuild_effects();
        Ok(l)
    }

    /// A landscape whose every matrix entry equals `value`, with dependencies
    /// on the `k` nodes following each node cyclically.
    pub fn constant(n: usize, k: usize, value: f64) -> Result<Self> {
        let rows = check_shape(n, k)?;
        let deps = (0..n)
            .map(|p| {
                let mut row: Vec<usize> = (1..=k).map(|d| (p + d) % n).collect();
                row.sort_unstable();
                row
            })
            .collect();
        Self::from_parts(n, k, deps, vec![value; rows * n])
    }

    fn empty() -> Self {
        Self {
            n: 0,
            k: 0,
            seed: None,
            deps: Vec::new(),
            matrix: Vec::new(),
            effects: Vec::new(),
        }
    }

    fn rebuild_effects(&mut self) {
        let (n, k) = (self.n, self.k);
        self.effects.resize_with(n, Vec::new);
        for (p, e) in self.effects.iter_mut().enumerate() {
            e.clear();
            e.push((p, 1 << k));
        }
        for (q, row) in self.deps.iter().enumerate() {
            for (j, &d) in row.iter().enumerate() {
                self.effects[d].push((q, 1 << (k - 1 - j)));
            }
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// Generator seed, or `None` for hand-built instances.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn deps(&self, p: usize) -> &[usize] {
        &self.deps[p]
    }

    pub fn rows(&self) -> usize {
        1 << (self.k + 1)
    }

    /// Row-major matrix entries.
    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    /// Matrix entry at 0-based `(row, column)`.
    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.matrix[row * self.n + col]
    }

    /// Nodes whose contributions change when `p` flips (`p` first), with the
    /// xor mask that maps their old row index to the new one.
    #[inline]
    pub fn flip_effects(&self, p: usize) -> &[(usize, usize)] {
        &self.effects[p]
    }

    #[inline]
    fn row_index0(&self, config: &Configuration, p: usize) -> usize {
        let bits = config.bits();
        let low = self.deps[p]
            .iter()
            .fold(0usize, |acc, &d| (acc << 1) | usize::from(bits[d]));
        (usize::from(bits[p]) << self.k) | low
    }

    /// 1-based row of the fitness matrix that holds node `p`'s contribution.
    pub fn contribution_row_index(&self, config: &Configuration, p: usize) -> usize {
        self.row_index0(config, p) + 1
    }

    #[inline]
    pub fn node_contribution(&self, config: &Configuration, p: usize) -> f64 {
        self.entry(self.row_index0(config, p), p)
    }

    /// Sum of all node contributions (`n` times the fitness).
    pub fn contribution_sum(&self, config: &Configuration) -> f64 {
        debug_assert_eq!(config.len(), self.n);
        (0..self.n).map(|p| self.node_contribution(config, p)).sum()
    }

    /// Mean node contribution.
    pub fn configuration_fitness(&self, config: &Configuration) -> f64 {
        self.contribution_sum(config) / self.n as f64
    }

    /// Sum of contributions over `members`.
    pub fn subunit_contribution_sum(
        &self,
        config: &Configuration,
        members: &[usize],
    ) -> Result<f64> {
        if members.is_empty() {
            return param("sub-unit member set is empty");
        }
        if let Some(&p) = members.iter().find(|&&p| p >= self.n) {
            return Err(NkError::Parameter(format!("node {p} out of range")));
        }
        Ok(members
            .iter()
            .map(|&p| self.node_contribution(config, p))
            .sum())
    }

    /// Change in the contribution sum if `p` alone were flipped, restricted to
    /// the affected nodes accepted by `include`.
    #[inline]
    pub fn flip_delta_filtered(
        &self,
        config: &Configuration,
        p: usize,
        mut include: impl FnMut(usize) -> bool,
    ) -> f64 {
        let mut delta = 0.0;
        for &(q, mask) in &self.effects[p] {
            if include(q) {
                let row = self.row_index0(config, q);
                delta += self.entry(row ^ mask, q) - self.entry(row, q);
            }
        }
        delta
    }

    /// Change in the total contribution sum if `p` alone were flipped.
    #[inline]
    pub fn flip_delta(&self, config: &Configuration, p: usize) -> f64 {
        self.flip_delta_filtered(config, p, |_| true)
    }

    /// Fitness of `config` with node `p` flipped, re-evaluating only `p` and
    /// the nodes that depend on it.
    pub fn fitness_after_flip(&self, config: &Configuration, p: usize) -> f64 {
        (self.contribution_sum(config) + self.flip_delta(config, p)) / self.n as f64
    }
}

fn check_shape(n: usize, k: usize) -> Result<usize> {
    if n == 0 {
        return param("n must be positive");
    }
    if k >= n {
        return param(format!("k = {k} must be in [0, {}]", n - 1));
    }
    if k + 1 > MAX_ROW_BITS {
        return Err(NkError::Capacity(format!(
            "k + 1 = {} exceeds {MAX_ROW_BITS} row bits",
            k + 1
        )));
    }
    let rows = 1usize << (k + 1);
    match rows.checked_mul(n) {
        Some(total) if total <= MAX_ENTRIES => Ok(rows),
        _ => Err(NkError::Capacity(format!(
            "{rows} x {n} matrix is too large"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// n=5, k=3, with node 4 (index 3) depending on nodes 1, 3, 5 (indices 0, 2, 4).
    fn worked_example() -> Landscape {
        let deps = vec![
            vec![1, 2, 3],
            vec![0, 2, 3],
            vec![0, 1, 3],
            vec![0, 2, 4],
            vec![0, 1, 2],
        ];
        let matrix = (0..16 * 5).map(|i| i as f64 / 100.0).collect();
        Landscape::from_parts(5, 3, deps, matrix).unwrap()
    }

    fn config(bits: [u8; 5]) -> Configuration {
        Configuration::from_bits(bits.to_vec()).unwrap()
    }

    #[test]
    fn row_index_matches_worked_example() {
        let l = worked_example();
        // nodes 1,3,5 = 0,0,1 and node 4 = 0
        assert_eq!(l.contribution_row_index(&config([0, 0, 0, 0, 1]), 3), 2);
        // nodes 1,3,5 = 0,1,1
        assert_eq!(l.contribution_row_index(&config([0, 0, 1, 0, 1]), 3), 4);
        // node 4 = 1 and nodes 1,3,5 = 0,0,0
        assert_eq!(l.contribution_row_index(&config([0, 0, 0, 1, 0]), 3), 9);
    }

    #[test]
    fn row_index_is_a_bijection() {
        let l = worked_example();
        let mut seen = [false; 16];
        // Enumerate the states of node 4 and its dependencies; others stay 0.
        for own in 0..2u8 {
            for dep_bits in 0..8u8 {
                let c = config([
                    (dep_bits >> 2) & 1,
                    0,
                    (dep_bits >> 1) & 1,
                    own,
                    dep_bits & 1,
                ]);
                let r = l.contribution_row_index(&c, 3);
                assert!(!seen[r - 1]);
                seen[r - 1] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn generated_shapes() {
        let l = Landscape::generate(5, 3, 11).unwrap();
        assert_eq!(l.rows(), 16);
        assert_eq!(l.matrix().len(), 16 * 5);

        let l = Landscape::generate(20, 0, 11).unwrap();
        assert_eq!(l.rows(), 2);
        assert!((0..20).all(|p| l.deps(p).is_empty()));

        let l = Landscape::generate(20, 19, 11).unwrap();
        for p in 0..20 {
            let expect: Vec<usize> = (0..20).filter(|&q| q != p).collect();
            assert_eq!(l.deps(p), &expect[..]);
        }
    }

    #[test]
    fn deps_invariants_hold() {
        for seed in 0..20 {
            let l = Landscape::generate(12, 4, seed).unwrap();
            for p in 0..12 {
                let d = l.deps(p);
                assert_eq!(d.len(), 4);
                assert!(d.windows(2).all(|w| w[0] < w[1]));
                assert!(!d.contains(&p));
            }
            assert!(l.matrix().iter().all(|v| (0.0..1.0).contains(v)));
        }
    }

    #[test]
    fn generation_is_deterministic_and_reuses_buffers() {
        let a = Landscape::generate(10, 4, 77).unwrap();
        let b = Landscape::generate(10, 4, 77).unwrap();
        assert_eq!(a, b);
        let mut c = Landscape::generate(15, 9, 3).unwrap();
        c.regenerate(10, 4, 77).unwrap();
        assert_eq!(a, c);
        assert_ne!(a, Landscape::generate(10, 4, 78).unwrap());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            Landscape::generate(5, 5, 0),
            Err(NkError::Parameter(_))
        ));
        assert!(matches!(
            Landscape::generate(0, 0, 0),
            Err(NkError::Parameter(_))
        ));
        assert!(matches!(
            Landscape::generate(40, 30, 0),
            Err(NkError::Capacity(_))
        ));
    }

    #[test]
    fn constant_matrix_contributions() {
        let l = Landscape::constant(6, 2, 0.5).unwrap();
        let c = Configuration::parse("101100").unwrap();
        for p in 0..6 {
            assert_eq!(l.node_contribution(&c, p), 0.5);
        }
        assert_eq!(l.configuration_fitness(&c), 0.5);
    }

    #[test]
    fn two_term_mean() {
        let l =
            Landscape::from_parts(2, 0, vec![vec![], vec![]], vec![0.2, 0.6, 0.9, 0.9]).unwrap();
        let c = Configuration::zeros(2);
        assert!((l.configuration_fitness(&c) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn k0_contribution_ignores_other_nodes() {
        let l = Landscape::generate(8, 0, 5).unwrap();
        let c = Configuration::parse("01101001").unwrap();
        for p in 0..8 {
            for q in (0..8).filter(|&q| q != p) {
                assert_eq!(
                    l.node_contribution(&c, p),
                    l.node_contribution(&c.flipped(q), p)
                );
            }
            assert_eq!(l.flip_effects(p).len(), 1);
        }
    }

    #[test]
    fn seeded_lookup_matches_scratch_addressing() {
        let l = Landscape::generate(5, 3, 1).unwrap();
        let c = Configuration::parse("10110").unwrap();
        for p in 0..5 {
            // scratch: walk deps building a decimal value by doubling
            let mut value = 0;
            for &d in l.deps(p) {
                value = value * 2 + c.bit(d) as usize;
            }
            let row = if c.bit(p) == 1 { 8 + value } else { value };
            assert_eq!(l.node_contribution(&c, p), l.matrix()[row * 5 + p]);
        }
    }

    #[test]
    fn subunit_sums() {
        let l = Landscape::generate(10, 3, 9).unwrap();
        let c = Configuration::parse("1100101001").unwrap();
        let all: Vec<usize> = (0..10).collect();
        let total = l.subunit_contribution_sum(&c, &all).unwrap();
        assert!((total - 10.0 * l.configuration_fitness(&c)).abs() < 1e-12);
        assert_eq!(
            l.subunit_contribution_sum(&c, &[4]).unwrap(),
            l.node_contribution(&c, 4)
        );
        let three = l.subunit_contribution_sum(&c, &[1, 2, 3]).unwrap();
        let direct =
            l.node_contribution(&c, 1) + l.node_contribution(&c, 2) + l.node_contribution(&c, 3);
        assert!((three - direct).abs() < 1e-15);
        assert!(l.subunit_contribution_sum(&c, &[]).is_err());
        assert!(l.subunit_contribution_sum(&c, &[10]).is_err());
    }

    #[test]
    fn flip_effect_sizes() {
        let l = Landscape::generate(20, 19, 2).unwrap();
        assert!((0..20).all(|p| l.flip_effects(p).len() == 20));
        let l = Landscape::generate(20, 0, 2).unwrap();
        let c = Configuration::zeros(20);
        let before = l.configuration_fitness(&c);
        let after = l.fitness_after_flip(&c, 3);
        let expect = before + (l.entry(1, 3) - l.entry(0, 3)) / 20.0;
        assert!((after - expect).abs() < 1e-15);
    }

    #[test]
    fn from_parts_validation() {
        assert!(Landscape::from_parts(2, 1, vec![vec![1], vec![1]], vec![0.1; 8]).is_err());
        assert!(Landscape::from_parts(2, 1, vec![vec![1], vec![0]], vec![0.1; 7]).is_err());
        assert!(Landscape::from_parts(2, 1, vec![vec![1], vec![0]], vec![1.0; 8]).is_err());
        assert!(Landscape::from_parts(
            3,
            2,
            vec![vec![2, 1], vec![0, 2], vec![0, 1]],
            vec![0.1; 24]
        )
        .is_err());
    }
}
