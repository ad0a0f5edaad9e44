//! Rule system for adding two k-digit numbers read from digit distributions.
//!
//! Attributes: `a_1..a_k` are the digits of the first number from the most
//! significant one, `a_{k+1}..a_{2k}` those of the second. `c_i` pairs the
//! digits at position `i` (plus the incoming carry `w_{i+1}` when `i < k`),
//! `w_i` is the carry out of position `i`, `y_i` the result digit and `y_0`
//! the final carry.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cascade::{Cascade, Stage};
use crate::error::{Error, Result};
use crate::inference::{Attribute, Proposition, Rule, RuleSet};
use crate::poss::Domain;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdditionSpec {
    pub k: usize,
}

pub fn digit_attr(i: usize) -> String {
    format!("a_{i}")
}

fn pair_label(u: usize, v: usize) -> String {
    format!("({u},{v})")
}

fn triple_label(u: usize, v: usize, w: usize) -> String {
    format!("({u},{v},{w})")
}

/// Builds the `3k + 1` rule sets (`32k` rules) in inference order:
/// `c_k, w_k`, then `c_i, w_i` for `i = k−1 … 1`, then `y_1 … y_k`, then `y_0`.
pub fn gen_addition_rules(spec: AdditionSpec) -> Result<Cascade> {
    let k = spec.k;
    if k == 0 {
        return Err(Error::InvalidConfig("addition needs k >= 1".into()));
    }
    let digits = Arc::new(Domain::numbered(10)?);
    let binary = Arc::new(Domain::numbered(2)?);
    let pairs = Arc::new(Domain::new((0..10).flat_map(|u| (0..10).map(move |v| pair_label(u, v))))?);
    let triples = Arc::new(Domain::new(
        (0..10).flat_map(|u| (0..10).flat_map(move |v| (0..2).map(move |w| triple_label(u, v, w)))),
    )?);
    let digit = |i: usize| Attribute::new(digit_attr(i), digits.clone());
    let one = |attr: &str, v: usize| vec![Proposition::new(attr, vec![v])];

    let mut stages = Vec::with_capacity(3 * k + 1);
    let mut sums: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in (1..=k).rev() {
        let (a, b) = (digit_attr(i), digit_attr(k + i));
        let c_name = format!("c_{i}");
        let w_name = format!("w_{i}");
        let mut rules = Vec::new();
        let c_set = if i == k {
            for j in 0..10 {
                rules.push(Rule::new(one(&a, j), (0..10).map(|v| j * 10 + v).collect()));
            }
            for j in 0..10 {
                rules.push(Rule::new(one(&b, j), (0..10).map(|u| u * 10 + j).collect()));
            }
            let sum: Vec<usize> = (0..100).map(|x| x / 10 + x % 10).collect();
            sums.insert(i, sum);
            RuleSet::new(&c_name, vec![digit(i), digit(k + i)], Attribute::new(&c_name, pairs.clone()), rules)?
        } else {
            let idx = |u: usize, v: usize, w: usize| u * 20 + v * 2 + w;
            for j in 0..10 {
                rules.push(Rule::new(one(&a, j), (0..10).flat_map(|v| (0..2).map(move |w| idx(j, v, w))).collect()));
            }
            for j in 0..10 {
                rules.push(Rule::new(one(&b, j), (0..10).flat_map(|u| (0..2).map(move |w| idx(u, j, w))).collect()));
            }
            let carry_in = format!("w_{}", i + 1);
            rules
                .push(Rule::new(one(&carry_in, 0), (0..10).flat_map(|u| (0..10).map(move |v| idx(u, v, 0))).collect()));
            let sum: Vec<usize> = (0..200).map(|x| x / 20 + (x / 2) % 10 + x % 2).collect();
            sums.insert(i, sum);
            RuleSet::new(
                &c_name,
                vec![digit(i), digit(k + i), Attribute::new(carry_in, binary.clone())],
                Attribute::new(&c_name, triples.clone()),
                rules,
            )?
        };
        let c_domain = c_set.output().domain.clone();
        stages.push(Stage::new(c_set, "c"));

        let carries: Vec<usize> = sums[&i].iter().enumerate().filter(|(_, &s)| s >= 10).map(|(x, _)| x).collect();
        let w_set = RuleSet::new(
            &w_name,
            vec![Attribute::new(&c_name, c_domain)],
            Attribute::new(&w_name, binary.clone()),
            vec![Rule::new(vec![Proposition::new(&c_name, carries)], vec![1])],
        )?;
        stages.push(Stage::new(w_set, "w"));
    }
    for i in 1..=k {
        let c_name = format!("c_{i}");
        let c_domain = stages.iter().find(|s| s.name() == c_name).unwrap().rules.output().domain.clone();
        let rules = (0..10)
            .map(|j| {
                let matching: Vec<usize> =
                    sums[&i].iter().enumerate().filter(|(_, &s)| s % 10 == j).map(|(x, _)| x).collect();
                Rule::new(vec![Proposition::new(&c_name, matching)], vec![j])
            })
            .collect();
        let name = format!("y_{i}");
        let set =
            RuleSet::new(&name, vec![Attribute::new(&c_name, c_domain)], Attribute::new(&name, digits.clone()), rules)?;
        stages.push(Stage::new(set, "y"));
    }
    let y0 = RuleSet::new(
        "y_0",
        vec![Attribute::new("w_1", binary.clone())],
        Attribute::new("y_0", binary),
        vec![Rule::new(one("w_1", 0), vec![0])],
    )?;
    stages.push(Stage::new(y0, "y"));
    Cascade::new(stages)
}

/// Labels of every intermediate and output attribute for the given digits
/// (`digits[i − 1]` is `a_i`).
pub fn addition_targets(k: usize, digits: &[usize]) -> Result<BTreeMap<String, usize>> {
    if digits.len() != 2 * k || digits.iter().any(|&d| d > 9) {
        return Err(Error::InvalidConfig(format!("expected {} digits in 0..=9", 2 * k)));
    }
    let mut t = BTreeMap::new();
    let mut carry = 0;
    for i in (1..=k).rev() {
        let (u, v) = (digits[i - 1], digits[k + i - 1]);
        let c = if i == k { u * 10 + v } else { u * 20 + v * 2 + carry };
        let s = u + v + if i == k { 0 } else { carry };
        t.insert(format!("c_{i}"), c);
        carry = usize::from(s >= 10);
        t.insert(format!("w_{i}"), carry);
        t.insert(format!("y_{i}"), s % 10);
    }
    t.insert("y_0".into(), carry);
    Ok(t)
}

/// Digits `a_1..a_{2k}` of two numbers below `10^k`.
pub fn operand_digits(k: usize, a: u64, b: u64) -> Vec<usize> {
    let digits = |mut x: u64| {
        let mut d = vec![0; k];
        for i in (0..k).rev() {
            d[i] = (x % 10) as usize;
            x /= 10;
        }
        d
    };
    let mut out = digits(a);
    out.extend(digits(b));
    out
}
