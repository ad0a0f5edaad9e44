//! Sudoku validity from cell digit distributions, using one comparison
//! attribute per pair of cells that must differ.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::cascade::{Cascade, Stage};
use crate::error::{Error, Result};
use crate::inference::{Attribute, Proposition, Rule, RuleSet};
use crate::poss::Domain;

/// A pair of 1-based cell coordinates `(i, j, i', j')`.
pub type Constraint = (usize, usize, usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SudokuSpec {
    pub side: usize,
    pub constraints: Vec<Constraint>,
}

impl SudokuSpec {
    pub fn new(side: usize) -> Result<Self> {
        let box_size = match side {
            4 => 2,
            9 => 3,
            _ => return Err(Error::InvalidConfig(format!("sudoku side must be 4 or 9, got {side}"))),
        };
        Ok(Self { side, constraints: constraint_set(side, box_size) })
    }
}

/// Rows, then columns, then boxes; duplicates keep their first position.
fn constraint_set(side: usize, b: usize) -> Vec<Constraint> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut push = |c: Constraint| {
        if seen.insert(c) {
            out.push(c);
        }
    };
    for i in 1..=side {
        for j in 1..=side {
            for j2 in j + 1..=side {
                push((i, j, i, j2));
            }
        }
    }
    for j in 1..=side {
        for i in 1..=side {
            for i2 in i + 1..=side {
                push((i, j, i2, j));
            }
        }
    }
    let row = |s: usize, i: usize| (s - 1) / b * b + (i - 1) / b + 1;
    let col = |s: usize, i: usize| (s - 1) % b * b + (i - 1) % b + 1;
    for s in 1..=side {
        for i in 1..=side {
            for i2 in i + 1..=side {
                push((row(s, i), col(s, i), row(s, i2), col(s, i2)));
            }
        }
    }
    out
}

pub fn cell_attr(i: usize, j: usize) -> String {
    format!("a_{i}{j}")
}

pub fn pair_attr(c: Constraint) -> String {
    format!("b_{}{}{}{}", c.0, c.1, c.2, c.3)
}

/// One rule set of `2·side` rules per constraint, then a single-rule set
/// whose premise asks every pair to differ and concludes `c ∈ {1}`.
pub fn gen_sudoku_rules(spec: &SudokuSpec) -> Result<Cascade> {
    let n = spec.side;
    let digits = Arc::new(Domain::numbered(n)?);
    let pairs = Arc::new(Domain::new((0..n).flat_map(|u| (0..n).map(move |v| format!("({u},{v})"))))?);
    let mut stages = Vec::with_capacity(spec.constraints.len() + 1);
    for &c in &spec.constraints {
        let (x, y) = (cell_attr(c.0, c.1), cell_attr(c.2, c.3));
        let name = pair_attr(c);
        let mut rules = Vec::with_capacity(2 * n);
        for k in 0..n {
            rules.push(Rule::new(vec![Proposition::new(&x, vec![k])], (0..n).map(|l| k * n + l).collect()));
            rules.push(Rule::new(vec![Proposition::new(&y, vec![k])], (0..n).map(|l| l * n + k).collect()));
        }
        let set = RuleSet::new(
            &name,
            vec![Attribute::new(x, digits.clone()), Attribute::new(y, digits.clone())],
            Attribute::new(&name, pairs.clone()),
            rules,
        )?;
        stages.push(Stage::new(set, "pairs"));
    }
    let differ: Vec<usize> = (0..n * n).filter(|x| x / n != x % n).collect();
    let premise: Vec<Proposition> =
        spec.constraints.iter().map(|&c| Proposition::new(pair_attr(c), differ.clone())).collect();
    let inputs = spec.constraints.iter().map(|&c| Attribute::new(pair_attr(c), pairs.clone())).collect();
    let valid = RuleSet::new(
        "c",
        inputs,
        Attribute::new("c", Arc::new(Domain::numbered(2)?)),
        vec![Rule::new(premise, vec![1])],
    )?;
    stages.push(Stage::new(valid, "valid"));
    Cascade::new(stages)
}

/// 1 when no constraint pair carries equal digits. `grid[i−1][j−1]` is the
/// digit at `(i, j)`.
pub fn sudoku_valid(spec: &SudokuSpec, grid: &[Vec<usize>]) -> usize {
    let ok = spec.constraints.iter().all(|&(i, j, i2, j2)| grid[i - 1][j - 1] != grid[i2 - 1][j2 - 1]);
    usize::from(ok)
}
