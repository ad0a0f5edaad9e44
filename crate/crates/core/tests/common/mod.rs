//! Independent reference implementations used by the integration tests.
//!
//! Everything here works on plain `Vec<f64>` rows and scalar loops, and
//! never calls the library's algorithms.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

pub mod props;

use pi_rules::rulefile::RuleFile;
use pi_rules::{Cascade, Domain, Env, PossibilityDistribution};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn running_example() -> Cascade {
    let text = std::fs::read_to_string(fixture("running_example.json")).unwrap();
    RuleFile::from_json(&text).unwrap().to_cascade().unwrap()
}

pub fn pos(x: f64) -> f64 {
    x.max(0.0)
}

pub fn assert_close(found: &[f64], expected: &[f64], tol: f64) {
    assert_eq!(found.len(), expected.len(), "length of {found:?} vs {expected:?}");
    for (i, (f, e)) in found.iter().zip(expected).enumerate() {
        assert!((f - e).abs() <= tol, "component {i}: {f} vs {e} (found {found:?}, expected {expected:?})");
    }
}

/// `out_i = min_j max(a_ij, x_j)`.
pub fn naive_minmax(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for row in a {
        let mut v: f64 = 1.0;
        for j in 0..row.len() {
            v = v.min(row[j].max(x[j]));
        }
        out.push(v);
    }
    out
}

/// `out_l = max_i (a_il ε y_i)` for the untransposed `a`.
pub fn naive_maxeps(a: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let cols = a.first().map_or(0, Vec::len);
    let mut out = vec![0.0; cols];
    for l in 0..cols {
        for i in 0..a.len() {
            let e = if a[i][l] < y[i] { y[i] } else { 0.0 };
            out[l] = f64::max(out[l], e);
        }
    }
    out
}

/// Direct evaluation of the closed-form Chebyshev components:
/// `∇_i = min_l max[(a_il − b_i)^+, max_k min((b_k − b_i)^+ / 2, (b_k − a_kl)^+)]`.
pub fn naive_nabla_components(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let m = a.len();
    let cols = a.first().map_or(0, Vec::len);
    (0..m)
        .map(|i| {
            let mut best: f64 = 1.0 - b[i];
            if cols > 0 {
                best = f64::INFINITY;
            }
            for l in 0..cols {
                let mut inner: f64 = 0.0;
                for k in 0..m {
                    inner = inner.max((pos(b[k] - b[i]) / 2.0).min(pos(b[k] - a[k][l])));
                }
                best = best.min(pos(a[i][l] - b[i]).max(inner));
            }
            best
        })
        .collect()
}

pub fn naive_nabla(a: &[Vec<f64>], b: &[f64]) -> f64 {
    naive_nabla_components(a, b).into_iter().fold(0.0, f64::max)
}

pub fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `min ‖A □ X − b‖∞` over `X ∈ {0, step, …, 1}^cols`, by depth-first
/// search with two-sided bounds on the partial products.
pub fn grid_nabla(a: &[Vec<f64>], b: &[f64], step: f64) -> f64 {
    let cols = a.first().map_or(0, Vec::len);
    let steps = (1.0 / step).round() as usize;
    let grid: Vec<f64> = (0..=steps).map(|i| i as f64 * step).collect();
    // Smallest entry of each row over columns l.. (lower bound on the rest).
    let mut tail_min = vec![vec![1.0f64; cols + 1]; a.len()];
    for (i, row) in a.iter().enumerate() {
        for l in (0..cols).rev() {
            tail_min[i][l] = tail_min[i][l + 1].min(row[l]);
        }
    }
    let mut best = f64::INFINITY;
    let partial = vec![1.0f64; a.len()];
    search(a, b, &grid, &tail_min, 0, &partial, &mut best);
    best
}

fn search(a: &[Vec<f64>], b: &[f64], grid: &[f64], tail_min: &[Vec<f64>], l: usize, partial: &[f64], best: &mut f64) {
    // Final out_i lies in [min(partial_i, tail_min_i), partial_i].
    let mut bound: f64 = 0.0;
    for i in 0..a.len() {
        let hi = partial[i];
        let lo = hi.min(tail_min[i][l]);
        bound = bound.max(b[i] - hi).max(lo - b[i]);
    }
    if bound >= *best {
        return;
    }
    let cols = a.first().map_or(0, Vec::len);
    if l == cols {
        *best = bound;
        return;
    }
    let mut next = partial.to_vec();
    for &x in grid {
        for i in 0..a.len() {
            next[i] = partial[i].min(a[i][l].max(x));
        }
        search(a, b, grid, tail_min, l + 1, &next, best);
    }
}

/// Ordered cells by grouping labels on their membership pattern and
/// sorting by `1 + Σ_{u ∉ Q_i} 2^{i−1}`.
pub fn brute_partition(conclusions: &[Vec<usize>], size: usize) -> Vec<(u64, Vec<bool>, Vec<usize>)> {
    let mut groups: BTreeMap<u64, (Vec<bool>, Vec<usize>)> = BTreeMap::new();
    for u in 0..size {
        let signs: Vec<bool> = conclusions.iter().map(|q| q.contains(&u)).collect();
        let psi = 1 + signs.iter().enumerate().filter(|(_, &s)| !s).map(|(i, _)| 1u64 << i).sum::<u64>();
        groups.entry(psi).or_insert_with(|| (signs.clone(), Vec::new())).1.push(u);
    }
    groups.into_iter().map(|(k, (s, c))| (k, s, c)).collect()
}

/// A rule given by raw parts: premise `[(attr index, values)]`,
/// conclusion, `s`, `r`.
#[derive(Debug, Clone)]
pub struct RawRule {
    pub premise: Vec<(usize, Vec<usize>)>,
    pub conclusion: Vec<usize>,
    pub s: f64,
    pub r: f64,
}

/// `(λ_i, ρ_i)` by scanning the input degrees directly.
pub fn direct_premise(rules: &[RawRule], inputs: &[Vec<f64>]) -> Vec<(f64, f64)> {
    rules
        .iter()
        .map(|rule| {
            let mut lambda: f64 = 1.0;
            let mut rho: f64 = 0.0;
            for (attr, values) in &rule.premise {
                let pi = &inputs[*attr];
                let mut inside: f64 = 0.0;
                let mut outside: f64 = 0.0;
                for (v, &d) in pi.iter().enumerate() {
                    if values.contains(&v) {
                        inside = inside.max(d);
                    } else {
                        outside = outside.max(d);
                    }
                }
                lambda = lambda.min(inside);
                rho = rho.max(outside);
            }
            (lambda, rho)
        })
        .collect()
}

/// `π*(u) = min_i (α_i if u ∈ Q_i else β_i)` with `α_i = max(s_i, λ_i)`
/// and `β_i = max(r_i, ρ_i)`.
pub fn direct_inference(rules: &[RawRule], inputs: &[Vec<f64>], size: usize) -> Vec<f64> {
    let premise = direct_premise(rules, inputs);
    (0..size)
        .map(|u| {
            rules
                .iter()
                .zip(&premise)
                .map(|(rule, &(l, r))| if rule.conclusion.contains(&u) { rule.s.max(l) } else { rule.r.max(r) })
                .fold(1.0, f64::min)
        })
        .collect()
}

pub fn env_of(pairs: &[(&str, &Arc<Domain>, Vec<f64>)]) -> Env {
    pairs
        .iter()
        .map(|(n, d, v)| (n.to_string(), PossibilityDistribution::new((*d).clone(), v.clone()).unwrap()))
        .collect()
}

/// Antipignistic transform by the textbook formula on the sorted view.
pub fn naive_antipignistic(p: &[f64]) -> Vec<f64> {
    let n = p.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| p[b].partial_cmp(&p[a]).unwrap());
    let sorted: Vec<f64> = idx.iter().map(|&i| p[i]).collect();
    let mut out = vec![0.0; n];
    for k in 0..n {
        let tail: f64 = sorted[k + 1..].iter().sum();
        out[idx[k]] = (k + 1) as f64 * sorted[k] + tail;
    }
    out
}
