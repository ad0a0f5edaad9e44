//! Ordered partition of an output domain induced by rule conclusions.
//!
//! Every label `u` of the output domain gets a sign tuple `μ = (t_1, …, t_n)`
//! where `t_i = +i` if `u ∈ Q_i` and `t_i = −i` otherwise. Labels sharing a
//! tuple form a cell. Tuples are ordered by
//! `Ψ(μ) = 1 + Σ_{t_i < 0} 2^{i−1}`, which is the same as comparing sign
//! bits from `n` down to `1` with positive before negative.
//!
//! The construction is incremental: cells of the first `i − 1` rules are
//! split by `Q_i`. Keeping the positive extensions ahead of the negative
//! ones at every step keeps the list sorted without a final sort.

use std::cmp::Ordering;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::poss::Domain;

/// Signs of one partition cell. Bit `i − 1` is set when `t_i = −i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignTuple {
    negative: FixedBitSet,
}

impl SignTuple {
    pub fn from_signs(positive: &[bool]) -> Self {
        let mut negative = FixedBitSet::with_capacity(positive.len());
        for (i, &p) in positive.iter().enumerate() {
            negative.set(i, !p);
        }
        Self { negative }
    }

    pub fn len(&self) -> usize {
        self.negative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.negative.len() == 0
    }

    /// Whether `t_j = +j` (1-based `j`).
    pub fn is_positive(&self, j: usize) -> bool {
        !self.negative.contains(j - 1)
    }

    /// The tuple as signed integers, e.g. `[-1, 2, -3, 4]`.
    pub fn signed(&self) -> Vec<i64> {
        (1..=self.len()).map(|j| if self.is_positive(j) { j as i64 } else { -(j as i64) }).collect()
    }

    fn extended(&self, positive: bool) -> Self {
        let mut negative = self.negative.clone();
        let n = negative.len();
        negative.grow(n + 1);
        negative.set(n, !positive);
        Self { negative }
    }
}

impl Ord for SignTuple {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.len().max(other.len());
        for i in (0..n).rev() {
            let a = self.negative.contains(i);
            let b = other.negative.contains(i);
            match a.cmp(&b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for SignTuple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `Ψ(μ) = 1 + Σ_{t_i = −i} 2^{i−1}` as an arbitrary-width integer.
pub fn psi_index(mu: &SignTuple) -> BigUint {
    let mut v = BigUint::from(0u32);
    for i in mu.negative.ones() {
        v.set_bit(i as u64, true);
    }
    v + 1u32
}

/// The ordered cells `σ(μ)` with their per-rule splits.
#[derive(Debug, Clone)]
pub struct PartitionIndex {
    n: usize,
    tuples: Vec<SignTuple>,
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
    top: Vec<Vec<usize>>,
    bot: Vec<Vec<usize>>,
    ops: usize,
}

impl PartitionIndex {
    /// Number of rules.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of cells (ω).
    pub fn omega(&self) -> usize {
        self.tuples.len()
    }

    pub fn tuples(&self) -> &[SignTuple] {
        &self.tuples
    }

    /// Sorted label indices of every cell, in tuple order.
    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// Position of the cell containing label `u`.
    pub fn cell_of(&self, u: usize) -> usize {
        self.cell_of[u]
    }

    /// Cells whose tuple has `t_j = +j` (1-based `j`).
    pub fn top(&self, j: usize) -> &[usize] {
        &self.top[j - 1]
    }

    /// Cells whose tuple has `t_j = −j` (1-based `j`).
    pub fn bot(&self, j: usize) -> &[usize] {
        &self.bot[j - 1]
    }

    /// Intersection and difference operations spent by the construction.
    pub fn operation_count(&self) -> usize {
        self.ops
    }

    /// Max of `values` (indexed by label) over every cell.
    pub fn cell_max(&self, values: &[f64]) -> Vec<f64> {
        self.cells.iter().map(|c| c.iter().map(|&u| values[u]).fold(0.0, f64::max)).collect()
    }

    /// Spreads one value per cell back onto the labels.
    pub fn expand(&self, per_cell: &[f64]) -> Vec<f64> {
        self.cell_of.iter().map(|&m| per_cell[m]).collect()
    }

    /// Text listing of `tuple -> cell labels`, one cell per line.
    pub fn dump(&self, domain: &Domain) -> String {
        let mut out = String::new();
        for (t, c) in self.tuples.iter().zip(&self.cells) {
            let labels: Vec<&str> = c.iter().map(|&u| domain.label(u)).collect();
            let signs: Vec<String> = t.signed().iter().map(i64::to_string).collect();
            let _ = writeln!(out, "({}) -> {{{}}}", signs.join(","), labels.join(", "));
        }
        out
    }
}

/// Builds the ordered partition of `domain` from the rule conclusions.
pub fn build_partition(conclusions: &[Vec<usize>], domain: &Domain) -> Result<PartitionIndex> {
    let size = domain.len();
    let mut work: Vec<(SignTuple, FixedBitSet)> = {
        let mut all = FixedBitSet::with_capacity(size);
        all.insert_range(..);
        vec![(SignTuple { negative: FixedBitSet::new() }, all)]
    };
    let mut ops = 0;
    for (rule, q) in conclusions.iter().enumerate() {
        if q.is_empty() {
            return Err(Error::EmptyConclusion { rule });
        }
        domain.check_indices(q)?;
        let mut qset = FixedBitSet::with_capacity(size);
        q.iter().for_each(|&u| qset.insert(u));

        let mut plus = Vec::with_capacity(work.len());
        let mut minus = Vec::new();
        for (tuple, cell) in work {
            let mut inside = cell.clone();
            inside.intersect_with(&qset);
            ops += 1;
            let hit = !inside.is_clear();
            let miss = inside.count_ones(..) < cell.count_ones(..);
            if hit && miss {
                ops += 1;
                let mut outside = cell;
                outside.difference_with(&qset);
                plus.push((tuple.extended(true), inside));
                minus.push((tuple.extended(false), outside));
            } else if hit {
                plus.push((tuple.extended(true), cell));
            } else {
                minus.push((tuple.extended(false), cell));
            }
        }
        plus.extend(minus);
        work = plus;
    }

    let n = conclusions.len();
    let mut cell_of = vec![0; size];
    let mut top = vec![Vec::new(); n];
    let mut bot = vec![Vec::new(); n];
    let mut tuples = Vec::with_capacity(work.len());
    let mut cells = Vec::with_capacity(work.len());
    for (m, (tuple, cell)) in work.into_iter().enumerate() {
        let labels: Vec<usize> = cell.ones().collect();
        for &u in &labels {
            cell_of[u] = m;
        }
        for j in 1..=n {
            if tuple.is_positive(j) {
                top[j - 1].push(m);
            } else {
                bot[j - 1].push(m);
            }
        }
        tuples.push(tuple);
        cells.push(labels);
    }
    Ok(PartitionIndex { n, tuples, cells, cell_of, top, bot, ops })
}
