use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{param, Result};

/// Assignment of the `n` nodes to `m` non-empty sub-units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl Partition {
    /// Splits `n` nodes into `m` sub-units.
    ///
    /// A random permutation fills the sub-units with `n / m` nodes each; the
    /// `n % m` leftover nodes all join one sub-unit chosen uniformly.
    pub fn random<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Self> {
        if m == 0 || m > n {
            return param(format!("sub-unit count {m} must be in [1, {n}]"));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let size = n / m;
        let mut assignment = vec![0; n];
        for (i, &node) in order[..size * m].iter().enumerate() {
            assignment[node] = i / size;
        }
        if !n.is_multiple_of(m) {
            let target = rng.gen_range(0..m);
            for &node in &order[size * m..] {
                assignment[node] = target;
            }
        }
        Self::from_assignment(assignment, m)
    }

    /// All nodes in a single sub-unit.
    pub fn single(n: usize) -> Self {
        Self {
            assignment: vec![0; n],
            members: vec![(0..n).collect()],
        }
    }

    pub fn from_assignment(assignment: Vec<usize>, m: usize) -> Result<Self> {
        let mut members = vec![Vec::new(); m];
        for (node, &unit) in assignment.iter().enumerate() {
            if unit >= m {
                return param(format!("node {node} assigned to sub-unit {unit} >= {m}"));
            }
            members[unit].push(node);
        }
        if let Some(u) = members.iter().position(Vec::is_empty) {
            return param(format!("sub-unit {u} is empty"));
        }
        Ok(Self {
            assignment,
            members,
        })
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    /// Number of sub-units.
    pub fn m(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn unit_of(&self, node: usize) -> usize {
        self.assignment[node]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Nodes of sub-unit `unit`, ascending.
    pub fn members(&self, unit: usize) -> &[usize] {
        &self.members[unit]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }
}
