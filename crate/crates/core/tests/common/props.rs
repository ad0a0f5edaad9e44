//! Strategies and property checks shared by the property suite and the
//! acceptance runner.

use std::sync::Arc;

use proptest::prelude::*;
use proptest::sample::subsequence;
use proptest::test_runner::TestCaseError;

use super::{brute_partition, direct_inference, direct_premise, grid_nabla, naive_antipignistic, RawRule};
use pi_rules::backprop::{solve_omega, OmegaSystem};
use pi_rules::inference::{infer, premise_degrees};
use pi_rules::learning::{build_system, minmax_chebyshev, params_from_vector, solve};
use pi_rules::partition::{build_partition, psi_index};
use pi_rules::poss::{poss_to_prob_antipignistic, prob_to_poss_antipignistic, prob_to_poss_minspec, DegreeMatrix};
use pi_rules::{
    Attribute, Domain, Env, PossibilityDistribution, ProbabilityDistribution, Proposition, Rule, RuleParams, RuleSet,
};

pub type Check = Result<(), TestCaseError>;

/// A random rule set over numbered domains with one input distribution per
/// attribute.
#[derive(Debug, Clone)]
pub struct Sys {
    pub attr_sizes: Vec<usize>,
    pub out: usize,
    pub rules: Vec<RawRule>,
    pub inputs: Vec<Vec<f64>>,
}

impl Sys {
    pub fn rule_set(&self) -> RuleSet {
        let attrs: Vec<Attribute> = self
            .attr_sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| Attribute::new(format!("x{i}"), Arc::new(Domain::numbered(n).unwrap())))
            .collect();
        let rules = self
            .rules
            .iter()
            .map(|r| {
                let premise = r.premise.iter().map(|(a, v)| Proposition::new(format!("x{a}"), v.clone())).collect();
                let mut rule = Rule::new(premise, r.conclusion.clone());
                rule.s = r.s;
                rule.r = r.r;
                rule
            })
            .collect();
        RuleSet::new("o", attrs, Attribute::new("o", Arc::new(Domain::numbered(self.out).unwrap())), rules).unwrap()
    }

    pub fn env(&self, set: &RuleSet) -> Env {
        set.inputs()
            .iter()
            .zip(&self.inputs)
            .map(|(a, v)| (a.name.clone(), PossibilityDistribution::new(a.domain.clone(), v.clone()).unwrap()))
            .collect()
    }
}

pub fn degree() -> impl Strategy<Value = f64> {
    prop_oneof![1 => Just(0.0), 1 => Just(1.0), 4 => 0.0..=1.0f64]
}

/// Degrees with at least one component equal to 1.
pub fn normalized(n: usize) -> impl Strategy<Value = Vec<f64>> {
    (prop::collection::vec(degree(), n), 0..n).prop_map(|(mut v, i)| {
        v[i] = 1.0;
        v
    })
}

pub fn nonempty_subset(n: usize) -> impl Strategy<Value = Vec<usize>> {
    subsequence((0..n).collect::<Vec<_>>(), 1..=n)
}

pub fn raw_rule(attr_sizes: Vec<usize>, out: usize, params: bool) -> impl Strategy<Value = RawRule> {
    let k = attr_sizes.len();
    let prop = (0..k).prop_flat_map(move |a| {
        let n = attr_sizes[a];
        nonempty_subset(n).prop_map(move |v| (a, v))
    });
    let param = if params { degree().boxed() } else { Just(0.0).boxed() };
    (prop::collection::vec(prop, 1..=2), nonempty_subset(out), param.clone(), param)
        .prop_map(|(premise, conclusion, s, r)| RawRule { premise, conclusion, s, r })
}

pub fn system(max_rules: usize, max_out: usize, params: bool) -> impl Strategy<Value = Sys> {
    (prop::collection::vec(2..=4usize, 1..=3), 1..=max_out, 1..=max_rules).prop_flat_map(move |(sizes, out, n)| {
        let inputs: Vec<_> = sizes.iter().map(|&s| normalized(s)).collect();
        (Just(sizes.clone()), Just(out), prop::collection::vec(raw_rule(sizes, out, params), n), inputs)
            .prop_map(|(attr_sizes, out, rules, inputs)| Sys { attr_sizes, out, rules, inputs })
    })
}

pub fn matrix(
    rows: std::ops::RangeInclusive<usize>,
    cols: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (rows, cols).prop_flat_map(|(m, n)| prop::collection::vec(prop::collection::vec(degree(), n), m))
}

pub fn dm(rows: &[Vec<f64>]) -> DegreeMatrix {
    DegreeMatrix::from_rows(rows).unwrap()
}

/// Probability masses from positive weights.
pub fn probability(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.001..1.0f64, n).prop_map(|w| {
        let s: f64 = w.iter().sum();
        w.iter().map(|x| x / s).collect()
    })
}

pub fn partition_case() -> impl Strategy<Value = (usize, Vec<Vec<usize>>)> {
    (1..=16usize, 1..=12usize).prop_flat_map(|(size, n)| (Just(size), prop::collection::vec(nonempty_subset(size), n)))
}

/// The ordered partition agrees with grouping labels by membership pattern.
pub fn check_partition((size, conclusions): (usize, Vec<Vec<usize>>)) -> Check {
    let domain = Domain::numbered(size).unwrap();
    let p = build_partition(&conclusions, &domain).unwrap();
    let oracle = brute_partition(&conclusions, size);
    prop_assert_eq!(p.omega(), oracle.len());
    for (mu, (psi, signs, cell)) in oracle.iter().enumerate() {
        prop_assert_eq!(&p.cells()[mu], cell);
        let t = &p.tuples()[mu];
        prop_assert_eq!(psi_index(t).to_string(), psi.to_string());
        for (j, &s) in signs.iter().enumerate() {
            prop_assert_eq!(t.is_positive(j + 1), s);
        }
        for &u in cell {
            prop_assert_eq!(p.cell_of(u), mu);
        }
    }
    let n = conclusions.len();
    for j in 1..=n {
        let mut all: Vec<usize> = p.top(j).iter().chain(p.bot(j)).copied().collect();
        all.sort();
        prop_assert_eq!(all, (0..p.omega()).collect::<Vec<_>>());
        for &mu in p.top(j) {
            prop_assert!(p.tuples()[mu].is_positive(j));
            prop_assert!(p.cells()[mu].iter().all(|u| conclusions[j - 1].contains(u)));
        }
        for &mu in p.bot(j) {
            prop_assert!(p.cells()[mu].iter().all(|u| !conclusions[j - 1].contains(u)));
        }
    }
    prop_assert!(2 * p.operation_count() <= 3 * size * n, "{} operations", p.operation_count());
    prop_assert!(p.tuples().windows(2).all(|w| w[0] < w[1] && psi_index(&w[0]) < psi_index(&w[1])));
    Ok(())
}

pub fn backprop_case() -> impl Strategy<Value = (Sys, Vec<f64>)> {
    (system(6, 8, true), (1..=8usize).prop_flat_map(normalized))
}

/// `F↓ ≤ F↑`, both reproduce the same output, and every pair of `F↓` has
/// a component equal to 1. Parameters stay below 1.
pub fn check_backprop_invariants((sys, target): (Sys, Vec<f64>)) -> Check {
    let mut sys = sys;
    for r in &mut sys.rules {
        r.s = r.s.min(0.99);
        r.r = r.r.min(0.99);
    }
    let set = sys.rule_set();
    let mut t = target;
    t.resize(sys.out, 0.0);
    if !t.contains(&1.0) {
        t[0] = 1.0;
    }
    let target = PossibilityDistribution::new(set.output().domain.clone(), t).unwrap();
    let omega = OmegaSystem::new(&set, &target).unwrap();
    let sol = solve_omega(&omega);
    prop_assert!(sol.f_low.iter().zip(&sol.f_high).all(|(l, h)| l <= h));
    prop_assert_eq!(omega.m.minmax(&sol.f_low).unwrap(), omega.m.minmax(&sol.f_high).unwrap());
    for pair in sol.f_low.chunks(2) {
        prop_assert_eq!(pair[0].max(pair[1]), 1.0);
    }
    Ok(())
}

pub fn inference_case() -> impl Strategy<Value = Sys> {
    system(10, 16, true)
}

pub fn check_inference(sys: Sys) -> Check {
    let set = sys.rule_set();
    let env = sys.env(&set);
    let p = premise_degrees(&set, &env).unwrap();
    let direct = direct_premise(&sys.rules, &sys.inputs);
    prop_assert_eq!(p.lambda.clone(), direct.iter().map(|d| d.0).collect::<Vec<_>>());
    prop_assert_eq!(p.rho.clone(), direct.iter().map(|d| d.1).collect::<Vec<_>>());
    for (&l, &r) in p.lambda.iter().zip(&p.rho) {
        prop_assert_eq!(l.max(r), 1.0);
    }
    let out = infer(&set, &env).unwrap();
    prop_assert_eq!(out.degrees(), &direct_inference(&sys.rules, &sys.inputs, sys.out)[..]);
    let part = set.partition();
    for (mu, cell) in part.cells().iter().enumerate() {
        for &u in cell {
            prop_assert_eq!(part.cell_of(u), mu);
            prop_assert_eq!(out.degrees()[u], out.degrees()[cell[0]]);
        }
    }
    Ok(())
}

pub fn compatibility_case() -> impl Strategy<Value = (Sys, Vec<f64>)> {
    (system(6, 8, true), prop::collection::vec(0.0..=1.0f64, 12))
}

/// Learning from a consistent sample and inferring with any parameter
/// vector between the lowest and greatest solutions reproduces the
/// sample's target.
pub fn check_compatibility((sys, mix): (Sys, Vec<f64>)) -> Check {
    let generator = sys.rule_set();
    let env = sys.env(&generator);
    let target = infer(&generator, &env).unwrap();
    let mut blank = generator.clone();
    blank.set_params(&vec![RuleParams { s: 0.0, r: 0.0 }; blank.len()]).unwrap();
    let premise = premise_degrees(&blank, &env).unwrap();
    let system = build_system(&blank, &premise, &target).unwrap();
    let sol = solve(&system);
    prop_assert!(sol.consistent);
    prop_assert_eq!(sol.nabla, 0.0);
    prop_assert!(sol.e_low.iter().zip(&sol.e_high).all(|(l, h)| l <= h));
    prop_assert_eq!(system.gamma.minmax(&sol.e_low).unwrap(), system.y.clone());
    prop_assert_eq!(system.gamma.minmax(&sol.e_high).unwrap(), system.y.clone());
    let between: Vec<f64> =
        sol.e_low.iter().zip(&sol.e_high).zip(&mix).map(|((l, h), t)| (l + t * (h - l)).clamp(*l, *h)).collect();
    for x in [&sol.e_low, &sol.e_high, &between] {
        let mut learned = blank.clone();
        learned.set_params(&params_from_vector(x)).unwrap();
        let out = infer(&learned, &env).unwrap();
        prop_assert_eq!(learned.partition().cell_max(out.degrees()), system.y.clone());
    }
    Ok(())
}

pub fn grid_case() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>)> {
    (matrix(1..=4, 1..=6), prop::collection::vec(degree(), 4)).prop_map(|(a, mut b)| {
        b.truncate(a.len());
        (a, b)
    })
}

/// Grid search over X only overestimates the distance, and by at most
/// half a step (0.05 step, so well within 0.05).
pub fn check_grid((a, b): (Vec<Vec<f64>>, Vec<f64>)) -> Check {
    let nabla = minmax_chebyshev(&dm(&a), &b).unwrap();
    let grid = grid_nabla(&a, &b, 0.05);
    prop_assert!(nabla <= grid + 1e-12, "nabla {} above grid {}", nabla, grid);
    prop_assert!(grid <= nabla + 0.05, "grid {} far above nabla {}", grid, nabla);
    Ok(())
}

pub fn descending_probability() -> impl Strategy<Value = Vec<f64>> {
    probability(1..=12).prop_map(|mut p| {
        p.sort_by(|a, b| b.total_cmp(a));
        p
    })
}

pub fn check_antipignistic(p: Vec<f64>) -> Check {
    let d = Arc::new(Domain::numbered(p.len()).unwrap());
    let prob = ProbabilityDistribution::new(d, p.clone()).unwrap();
    let pi = prob_to_poss_antipignistic(&prob);
    prop_assert_eq!(pi.degrees()[0], 1.0);
    for (x, y) in pi.degrees().iter().zip(naive_antipignistic(&p)) {
        prop_assert!((x - y).abs() <= 1e-12);
    }
    for w in pi.degrees().windows(2) {
        prop_assert!(w[0] >= w[1]);
    }
    for (i, w) in p.windows(2).enumerate() {
        prop_assert_eq!(w[0] > w[1], pi.degrees()[i] > pi.degrees()[i + 1]);
    }
    let back = poss_to_prob_antipignistic(&pi).unwrap();
    for (x, y) in back.masses().iter().zip(&p) {
        prop_assert!((x - y).abs() <= 1e-12, "{:?} vs {:?}", back.masses(), p);
    }
    let star = prob_to_poss_minspec(&prob);
    prop_assert!(star.is_normalized());
    for (s, a) in star.degrees().iter().zip(pi.degrees()) {
        prop_assert!(s <= a);
    }
    Ok(())
}
