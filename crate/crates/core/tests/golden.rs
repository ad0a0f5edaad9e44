//! Worked examples of the running two-digit system and the transforms.

mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use common::{assert_close, fixture, running_example};
use pi_rules::backprop::{solve_omega, targeted_inputs, OmegaSystem, Pick};
use pi_rules::inference::{build_inference_matrix, infer, premise_degrees};
use pi_rules::io::read_training_jsonl;
use pi_rules::learning::{
    build_gamma, build_system, cascade_learn, chebyshev_components, learn_ruleset, reliable, solve, StackedSystem,
    ThresholdConfig,
};
use pi_rules::partition::psi_index;
use pi_rules::poss::{poss_to_prob_antipignistic, prob_to_poss_antipignistic, prob_to_poss_minspec, DegreeMatrix};
use pi_rules::{
    CascadeOptions, Domain, Env, PossibilityDistribution, PremiseDegrees, ProbabilityDistribution, RuleParams, RuleSet,
};

const INCONSISTENT_GAMMA: [[f64; 8]; 4] = [
    [1., 0., 0., 1., 1., 0., 0., 1.],
    [1., 1., 1., 1., 1., 0., 0., 1.],
    [1., 0., 0., 1., 1., 1., 1., 1.],
    [1., 1., 1., 1., 1., 1., 1., 1.],
];

fn stage(name: &str) -> RuleSet {
    running_example().stage(name).unwrap().rules.clone()
}

fn premise(v: &[f64]) -> PremiseDegrees {
    PremiseDegrees::from_input_vector(v)
}

/// Target over the b domain given in cell order (1,1), (0,1), (1,0), (0,0).
fn b_target(cells: [f64; 4]) -> PossibilityDistribution {
    let rules = stage("b");
    PossibilityDistribution::new(rules.output().domain.clone(), vec![cells[3], cells[1], cells[2], cells[0]]).unwrap()
}

fn rows(m: &DegreeMatrix) -> Vec<Vec<f64>> {
    m.to_rows()
}

#[test]
fn possibility_measure_of_singletons() {
    let d = Arc::new(Domain::numbered(2).unwrap());
    let pi = PossibilityDistribution::new(d, vec![1.0, 0.1]).unwrap();
    assert_eq!(pi.possibility_measure(&[0]).unwrap(), 1.0);
    assert_eq!(pi.possibility_measure(&[1]).unwrap(), 0.1);
}

#[test]
fn ordered_tuples_of_the_first_rule_set() {
    let rules = stage("b");
    let p = rules.partition();
    let signed: Vec<Vec<i64>> = p.tuples().iter().map(|t| t.signed()).collect();
    assert_eq!(signed, vec![vec![-1, 2, -3, 4], vec![1, -2, -3, 4], vec![-1, 2, 3, -4], vec![1, -2, 3, -4]]);
    let d = &rules.output().domain;
    let cells: Vec<Vec<&str>> = p.cells().iter().map(|c| c.iter().map(|&u| d.label(u)).collect()).collect();
    assert_eq!(cells, vec![vec!["(1,1)"], vec!["(0,1)"], vec!["(1,0)"], vec!["(0,0)"]]);
    assert_eq!(
        p.dump(d),
        "(-1,2,-3,4) -> {(1,1)}\n(1,-2,-3,4) -> {(0,1)}\n(-1,2,3,-4) -> {(1,0)}\n(1,-2,3,-4) -> {(0,0)}\n"
    );
}

#[test]
fn psi_examples() {
    use pi_rules::partition::SignTuple;
    let psi = |signs: &[bool]| psi_index(&SignTuple::from_signs(signs)).to_string();
    assert_eq!(psi(&[true]), "1");
    assert_eq!(psi(&[false]), "2");
    assert_eq!(psi(&[true, false]), "3");
    assert_eq!(psi(&[true; 7]), "1");
}

#[test]
fn symbolic_matrix_of_the_first_rule_set() {
    // Distinct parameters make every placement visible.
    let mut rules = stage("b");
    let params: Vec<RuleParams> = (1..=4).map(|i| RuleParams { s: 0.1 * i as f64, r: 0.01 * i as f64 }).collect();
    rules.set_params(&params).unwrap();
    let (s, r) = (|i: usize| params[i - 1].s, |i: usize| params[i - 1].r);
    let expected = vec![
        vec![1.0, r(1), s(2), 1.0, 1.0, r(3), s(4), 1.0],
        vec![s(1), 1.0, 1.0, r(2), 1.0, r(3), s(4), 1.0],
        vec![1.0, r(1), s(2), 1.0, s(3), 1.0, 1.0, r(4)],
        vec![s(1), 1.0, 1.0, r(2), s(3), 1.0, 1.0, r(4)],
    ];
    assert_eq!(rows(&build_inference_matrix(&rules)), expected);
    assert_eq!(rows(rules.matrix()), expected);
}

#[test]
fn single_rule_matrices() {
    let d = Arc::new(Domain::numbered(3).unwrap());
    let a = pi_rules::Attribute::new("a", d.clone());
    let mut rule = pi_rules::Rule::new(vec![pi_rules::Proposition::new("a", vec![0])], vec![0, 1]);
    rule.s = 0.3;
    rule.r = 0.6;
    let set = RuleSet::new("o", vec![a.clone()], pi_rules::Attribute::new("o", d.clone()), vec![rule.clone()]).unwrap();
    assert_eq!(rows(set.matrix()), vec![vec![0.3, 1.0], vec![1.0, 0.6]]);
    rule.conclusion = vec![0, 1, 2];
    let set = RuleSet::new("o", vec![a], pi_rules::Attribute::new("o", d), vec![rule]).unwrap();
    assert_eq!(set.partition().omega(), 1);
    assert_eq!(set.partition().tuples()[0].signed(), vec![1]);
}

#[test]
fn gamma_of_a_consistent_sample() {
    let rules = stage("b");
    let p = premise(&[0.12, 1.0, 0.18, 1.0, 1.0, 0.43, 1.0, 0.66]);
    let sys = build_system(&rules, &p, &b_target([0.2, 0.87, 0.2, 1.0])).unwrap();
    assert_eq!(sys.y, vec![0.2, 0.87, 0.2, 1.0]);
    assert_eq!(
        rows(&sys.gamma),
        vec![
            vec![1.0, 1.0, 0.18, 1.0, 1.0, 0.43, 1.0, 1.0],
            vec![0.12, 1.0, 1.0, 1.0, 1.0, 0.43, 1.0, 1.0],
            vec![1.0, 1.0, 0.18, 1.0, 1.0, 1.0, 1.0, 0.66],
            vec![0.12, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.66],
        ]
    );
    assert_eq!(rows(&build_gamma(rules.partition(), &p)), rows(&sys.gamma));
}

#[test]
fn lowest_and_greatest_solutions() {
    let rules = stage("b");
    let p = premise(&[0.12, 1.0, 0.18, 1.0, 1.0, 0.43, 1.0, 0.66]);
    let sol = solve(&build_system(&rules, &p, &b_target([0.2, 0.87, 0.2, 1.0])).unwrap());
    assert_eq!(sol.e_low, vec![1.0, 0.0, 0.2, 0.0, 0.0, 0.87, 0.0, 1.0]);
    assert_eq!(sol.e_high, vec![1.0, 0.2, 0.2, 1.0, 1.0, 0.87, 0.87, 1.0]);
    assert!(sol.consistent);
    assert_eq!(sol.nabla, 0.0);

    let rules = stage("c");
    let p = premise(&[0.25, 1.0, 0.35, 1.0]);
    let target = PossibilityDistribution::new(rules.output().domain.clone(), vec![0.4, 1.0]).unwrap();
    let sys = build_system(&rules, &p, &target).unwrap();
    assert_eq!(rows(&sys.gamma), vec![vec![1.0, 1.0, 0.35, 1.0], vec![0.25, 1.0, 1.0, 1.0]]);
    let sol = solve(&sys);
    assert_eq!(sol.e_low, vec![1.0, 0.0, 0.4, 0.0]);
    assert_eq!(sol.e_high, vec![1.0, 0.4, 0.4, 1.0]);
    assert!(sol.consistent);
}

#[test]
fn inconsistent_sample_distance() {
    let rules = stage("b");
    let p = premise(&[1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0]);
    let sys = build_system(&rules, &p, &b_target([0.005, 0.0, 0.0, 1.0])).unwrap();
    let gamma: Vec<Vec<f64>> = INCONSISTENT_GAMMA.iter().map(|r| r.to_vec()).collect();
    assert_eq!(rows(&sys.gamma), gamma);
    let comps = chebyshev_components(&sys.gamma, &sys.y).unwrap();
    assert_close(&comps, &[0.0, 0.0025, 0.0025, 0.0], 1e-12);
    let sol = solve(&sys);
    assert!((sol.nabla - 0.0025).abs() < 1e-12);
    assert!(!sol.consistent);
    assert_close(&sol.y_approx, &[0.0025, 0.0025, 0.0025, 1.0], 1e-12);
    assert_close(&sol.x_approx, &[0.0, 0.0025, 0.0025, 0.0, 0.0, 0.0025, 0.0025, 0.0], 1e-12);
    assert!(reliable(&sys, 0.01));
    assert!(!reliable(&sys, 0.002));
    assert!(reliable(&sys, 1.001));
}

#[test]
fn stacked_inconsistent_samples() {
    let gamma = DegreeMatrix::from_rows(&INCONSISTENT_GAMMA.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap();
    let mut stacked = StackedSystem::new(8);
    stacked.push(&gamma, &[0.0, 0.0, 0.0, 1.0]).unwrap();
    stacked.push(&gamma, &[0.0025, 0.0025, 0.0025, 1.0]).unwrap();
    assert_eq!(stacked.gamma.rows(), 8);
    let (nabla, x) = stacked.lowest_solution();
    assert!((nabla - 0.00125).abs() < 1e-12);
    assert_close(&x, &[0.0, 0.00125, 0.00125, 0.0, 0.0, 0.00125, 0.00125, 0.0], 1e-12);
}

#[test]
fn stacked_samples_through_learn_ruleset() {
    // Crisp inputs a1 = 0, a2 = 0 give the premise degrees of the inconsistent sample,
    // and these targets give the two reduced systems of the stack.
    let rules = stage("b");
    let d = rules.inputs()[0].domain.clone();
    let t1 = b_target([0.0, 0.0, 0.0, 1.0]);
    let t2 = b_target([0.0025, 0.0025, 0.0025, 1.0]);
    let env: Env = common::env_of(&[("a1", &d, vec![1.0, 0.0]), ("a2", &d, vec![1.0, 0.0])]);
    let p = premise_degrees(&rules, &env).unwrap();
    assert_eq!(p.input_vector(), vec![1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0]);
    let report = learn_ruleset(&rules, &[(&env, &t1), (&env, &t2)], 0.01).unwrap();
    assert_eq!(report.selected, 2);
    assert!((report.stacked_nabla - 0.00125).abs() < 1e-12);
    let x: Vec<f64> = report.params.iter().flat_map(|p| [p.s, p.r]).collect();
    assert_close(&x, &[0.0, 0.00125, 0.00125, 0.0, 0.0, 0.00125, 0.00125, 0.0], 1e-12);
}

#[test]
fn premise_degrees_and_first_inference() {
    let rules = stage("b");
    let d = rules.inputs()[0].domain.clone();
    let env = common::env_of(&[("a1", &d, vec![1.0, 0.01]), ("a2", &d, vec![0.04, 1.0])]);
    let p = premise_degrees(&rules, &env).unwrap();
    assert_eq!(p.lambda, vec![1.0, 0.01, 0.04, 1.0]);
    assert_eq!(p.rho, vec![0.01, 1.0, 1.0, 0.04]);
    let out = infer(&rules, &env).unwrap();
    // Domain order (0,0), (0,1), (1,0), (1,1).
    assert_eq!(out.degrees(), &[0.04, 1.0, 0.01, 0.01]);
    let m = DegreeMatrix::from_rows(&[
        vec![1., 0., 0., 1., 1., 0., 0., 1.],
        vec![0., 1., 1., 0., 1., 0., 0., 1.],
        vec![1., 0., 0., 1., 0., 1., 1., 0.],
        vec![0., 1., 1., 0., 0., 1., 1., 0.],
    ])
    .unwrap();
    assert_eq!(rows(rules.matrix()), rows(&m));
    let o = pi_rules::poss::minmax_product(&m, &[1.0, 0.01, 0.01, 1.0, 0.04, 1.0, 1.0, 0.04]).unwrap();
    assert_eq!(o, vec![0.01, 1.0, 0.01, 0.04]);
    let c = pi_rules::inference::chain(&out, &stage("c")).unwrap();
    assert_eq!(c.possibility_measure(&[0]).unwrap(), 1.0);
    assert_eq!(c.possibility_measure(&[1]).unwrap(), 0.04);
}

struct StageExpectation {
    premise: [[f64; 8]; 4],
    nabla: [f64; 4],
    approx: [[f64; 4]; 4],
}

#[test]
fn two_stage_cascade_learning() {
    let cascade = running_example();
    let samples = read_training_jsonl(&fixture("two_stage_train.jsonl"), &cascade, false).unwrap();
    assert_eq!(samples.len(), 4);

    // Stage b, every sample with zero parameters.
    let b = StageExpectation {
        premise: [
            [1.0, 0.01, 0.01, 1.0, 0.04, 1.0, 1.0, 0.04],
            [0.03, 1.0, 1.0, 0.03, 0.02, 1.0, 1.0, 0.02],
            [1.0, 1.0, 1.0, 1.0, 0.1, 1.0, 1.0, 0.1],
            [1.0, 0.01, 0.01, 1.0, 0.05, 1.0, 1.0, 0.05],
        ],
        nabla: [0.04, 0.03, 1.0, 1.0],
        approx: [[0.01, 1.0, 0.01, 0.04], [1.0, 0.03, 0.02, 0.02], [1.0, 1.0, 0.1, 0.1], [0.01, 1.0, 0.01, 0.05]],
    };
    let rules_b = stage("b");
    let mut inferred = Vec::new();
    for (i, s) in samples.iter().enumerate() {
        let p = premise_degrees(&rules_b, &s.inputs).unwrap();
        assert_eq!(p.input_vector(), b.premise[i].to_vec(), "premise of sample {}", i + 1);
        let target = PossibilityDistribution::one_point(rules_b.output().domain.clone(), s.targets["b"]).unwrap();
        let sol = solve(&build_system(&rules_b, &p, &target).unwrap());
        assert_eq!(sol.nabla, b.nabla[i], "nabla of sample {}", i + 1);
        assert_eq!(sol.y_approx, b.approx[i].to_vec(), "approximation of sample {}", i + 1);
        let out = infer(&rules_b, &s.inputs).unwrap();
        inferred.push(rules_b.partition().cell_max(out.degrees()));
    }
    // Inferred b distributions in cell order; the unreliable samples'
    // inferred outputs coincide with their Chebyshev approximations.
    assert_eq!(inferred, b.approx.iter().map(|r| r.to_vec()).collect::<Vec<_>>());

    let c_premise = [[0.04, 1.0, 1.0, 0.04], [1.0, 0.03, 0.03, 1.0], [1.0, 1.0, 1.0, 1.0], [0.05, 1.0, 1.0, 0.05]];
    let c_nabla = [0.04, 0.03, 1.0, 1.0];
    let c_approx = [[1.0, 0.04], [0.03, 1.0], [1.0, 1.0], [1.0, 0.05]];

    let mut taus = BTreeMap::new();
    taus.insert("b".to_string(), 0.05);
    taus.insert("c".to_string(), 0.05);
    let learned = cascade_learn(&cascade, &samples, &taus, CascadeOptions::default()).unwrap();
    let [rb, rc] = &learned.reports[..] else { panic!("two stages expected") };
    let flags = |r: &pi_rules::learning::LearnReport| r.samples.iter().map(|s| s.reliable).collect::<Vec<_>>();
    let nablas = |r: &pi_rules::learning::LearnReport| r.samples.iter().map(|s| s.nabla).collect::<Vec<_>>();
    assert_eq!(nablas(rb), b.nabla.to_vec());
    assert_eq!(nablas(rc), c_nabla.to_vec());
    assert_eq!(flags(rb), vec![true, true, false, false]);
    assert_eq!(flags(rc), vec![true, true, false, false]);
    assert_eq!((rb.selected, rc.selected), (2, 2));
    assert_eq!((rb.stacked_nabla, rc.stacked_nabla), (0.0, 0.0));
    for p in learned.cascade.params().values().flatten() {
        assert_eq!((p.s, p.r), (0.0, 0.0));
    }

    let rules_c = learned.cascade.stage("c").unwrap().rules.clone();
    for (i, env) in learned.envs.iter().enumerate() {
        let got = rules_b.partition().cell_max(env["b"].degrees());
        assert_eq!(got, b.approx[i].to_vec());
        let p = premise_degrees(&rules_c, env).unwrap();
        assert_eq!(p.input_vector(), c_premise[i].to_vec(), "stage c premise of sample {}", i + 1);
        let target =
            PossibilityDistribution::one_point(rules_c.output().domain.clone(), samples[i].targets["c"]).unwrap();
        let sol = solve(&build_system(&rules_c, &p, &target).unwrap());
        assert_eq!(sol.y_approx, c_approx[i].to_vec(), "stage c approximation of sample {}", i + 1);
    }
    assert_eq!(rows(rules_c.matrix()), vec![vec![1.0, 0.0, 0.0, 1.0], vec![0.0, 1.0, 1.0, 0.0]]);
}

#[test]
fn transforms_of_sharp_and_flat_rows() {
    let d = Arc::new(Domain::numbered(10).unwrap());
    let mut sharp = vec![0.01; 10];
    sharp[0] = 0.91;
    let flat = vec![0.15, 0.14, 0.13, 0.12, 0.11, 0.09, 0.08, 0.07, 0.06, 0.05];
    let p1 = ProbabilityDistribution::new(d.clone(), sharp).unwrap();
    let p2 = ProbabilityDistribution::new(d, flat).unwrap();
    let round2 = |v: &[f64]| v.iter().map(|x| (x * 100.0).round() / 100.0).collect::<Vec<_>>();

    let mut expected = vec![0.1; 10];
    expected[0] = 1.0;
    assert_eq!(round2(prob_to_poss_antipignistic(&p1).degrees()), expected);
    assert_eq!(
        round2(prob_to_poss_antipignistic(&p2).degrees()),
        vec![1.0, 0.99, 0.97, 0.94, 0.90, 0.80, 0.74, 0.67, 0.59, 0.50]
    );
    assert_eq!(
        round2(prob_to_poss_minspec(&p1).degrees()),
        vec![1.0, 0.09, 0.08, 0.07, 0.06, 0.05, 0.04, 0.03, 0.02, 0.01]
    );
    assert_eq!(
        round2(prob_to_poss_minspec(&p2).degrees()),
        vec![1.0, 0.85, 0.71, 0.58, 0.46, 0.35, 0.26, 0.18, 0.11, 0.05]
    );
    assert_eq!(prob_to_poss_antipignistic(&p1).degrees()[0], 1.0);
}

#[test]
fn inverse_antipignistic_small_cases() {
    let d = Arc::new(Domain::numbered(2).unwrap());
    let pi = PossibilityDistribution::new(d.clone(), vec![1.0, 0.1]).unwrap();
    assert_close(poss_to_prob_antipignistic(&pi).unwrap().masses(), &[0.95, 0.05], 1e-15);
    let pi = PossibilityDistribution::new(d.clone(), vec![1.0, 1.0]).unwrap();
    assert_close(poss_to_prob_antipignistic(&pi).unwrap().masses(), &[0.5, 0.5], 1e-15);
    let pi = PossibilityDistribution::new(d, vec![0.5, 0.2]).unwrap();
    assert!(poss_to_prob_antipignistic(&pi).is_err());
}

#[test]
fn backpropagation_of_a_crisp_target() {
    let rules = stage("b");
    let target = b_target([0.0, 0.0, 1.0, 0.0]);
    let sys = OmegaSystem::new(&rules, &target).unwrap();
    assert_eq!(sys.o_target, vec![0.0, 0.0, 1.0, 0.0]);
    let sol = solve_omega(&sys);
    assert_eq!(sol.f_low, vec![0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
    assert!(sol.consistent);
    let inputs = targeted_inputs(&rules, &sol, Pick::default()).unwrap();
    assert_eq!(inputs["a1"].degrees(), &[0.0, 1.0]);
    assert_eq!(inputs["a2"].degrees(), &[1.0, 0.0]);
    assert_eq!(poss_to_prob_antipignistic(&inputs["a1"]).unwrap().masses(), &[0.0, 1.0]);
    assert_eq!(poss_to_prob_antipignistic(&inputs["a2"]).unwrap().masses(), &[1.0, 0.0]);
    let env: Env = inputs.into_iter().collect();
    assert_eq!(infer(&rules, &env).unwrap().degrees(), target.degrees());
    assert_eq!(pi_rules::backprop::distance_to_target(&rules, &env, &target).unwrap(), 0.0);
}

#[test]
fn threshold_candidates() {
    let t = ThresholdConfig::default().candidates().unwrap();
    assert_eq!(t.len(), 30);
    assert!((t[0] - 4.119e-8).abs() < 1e-11, "t_1 = {}", t[0]);
    assert_eq!(t[29], 1.001);
    assert!(t.windows(2).all(|w| w[0] < w[1]));
    let t = ThresholdConfig { h: 2.0, ..ThresholdConfig::default() }.candidates().unwrap();
    assert!((t[0] - 1.112e-3).abs() < 1e-6, "t_1 = {}", t[0]);
}
