//! Learning rule parameters from training samples.
//!
//! A sample with premise degrees `(λ, ρ)` and a target distribution gives
//! the system `Ẏ = Γ̇ □ X`, where `X = (s_1, r_1, …, s_n, r_n)` holds the
//! unknown rule parameters. Inconsistent systems are replaced by their
//! lowest Chebyshev approximation. Samples whose Chebyshev distance is below
//! a threshold are stacked into one system, whose lowest approximate
//! solution gives the parameters.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::cascade::{prepare_output, Cascade, CascadeOptions};
use crate::error::{Error, Result};
use crate::inference::{output_from_premises, premise_degrees, Env, PremiseDegrees, RuleParams, RuleSet};
use crate::partition::PartitionIndex;
use crate::poss::{Degree, DegreeMatrix, PossibilityDistribution};

/// `Ẏ = Γ̇ □ X` for one sample.
#[derive(Debug, Clone)]
pub struct EquationSystem<'a> {
    pub gamma: DegreeMatrix,
    pub y: Vec<Degree>,
    partition: &'a PartitionIndex,
}

impl<'a> EquationSystem<'a> {
    pub fn partition(&self) -> &'a PartitionIndex {
        self.partition
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub e_low: Vec<Degree>,
    pub e_high: Vec<Degree>,
    pub nabla: Degree,
    pub consistent: bool,
    pub y_approx: Vec<Degree>,
    pub x_approx: Vec<Degree>,
}

/// Row μ of `Γ̇` holds `(λ_j, 1)` in columns `(2j−1, 2j)` when μ ∈ top(j)
/// and `(1, ρ_j)` otherwise.
pub fn build_gamma(partition: &PartitionIndex, premise: &PremiseDegrees) -> DegreeMatrix {
    let n = partition.n();
    let mut g = DegreeMatrix::filled(partition.omega(), 2 * n, 1.0);
    for j in 0..n {
        for &mu in partition.top(j + 1) {
            g.set(mu, 2 * j, premise.lambda[j]);
        }
        for &mu in partition.bot(j + 1) {
            g.set(mu, 2 * j + 1, premise.rho[j]);
        }
    }
    g
}

/// Builds the system of a sample. `y_μ` is the largest target degree on
/// cell μ.
pub fn build_system<'a>(
    rules: &'a RuleSet,
    premise: &PremiseDegrees,
    target: &PossibilityDistribution,
) -> Result<EquationSystem<'a>> {
    if **target.domain() != *rules.output().domain {
        return Err(Error::DomainMismatch { attr: rules.output().name.clone() });
    }
    if premise.lambda.len() != rules.len() || premise.rho.len() != rules.len() {
        return Err(Error::ShapeMismatch { expected: rules.len(), found: premise.lambda.len() });
    }
    let partition = rules.partition();
    Ok(EquationSystem { gamma: build_gamma(partition, premise), y: partition.cell_max(target.degrees()), partition })
}

/// Per-row Chebyshev components `∇_i` of any system `A □ x = b`:
///
/// `∇_i = min_l max[(a_il − b_i)^+, max_k min((b_k − b_i)^+ / 2, (b_k − a_kl)^+)]`.
///
/// The inner maximum over `k` is answered for every `i` at once per column
/// by sorting on `b_k − 2(b_k − a_kl)^+`: rows above that key contribute
/// `(b_k − a_kl)^+`, the others `(b_k − b_i)^+ / 2`.
pub fn chebyshev_components(a: &DegreeMatrix, b: &[Degree]) -> Result<Vec<Degree>> {
    let m = a.rows();
    if b.len() != m {
        return Err(Error::ShapeMismatch { expected: m, found: b.len() });
    }
    let mut comp = vec![1.0f64; m];
    if a.cols() == 0 {
        // An empty product is the constant 1.
        for (c, &bi) in comp.iter_mut().zip(b) {
            *c = 1.0 - bi;
        }
        return Ok(comp);
    }
    // Rows by decreasing b_i. Rows with a zero cap have key b_k, so they
    // keep this order in every column and only the others are sorted.
    let mut by_b: Vec<usize> = (0..m).collect();
    by_b.sort_unstable_by(|&x, &y| b[y].total_cmp(&b[x]));
    let mut hot: Vec<(f64, usize)> = Vec::new();
    let mut order: Vec<(f64, usize)> = Vec::with_capacity(m);
    let mut cap = vec![0.0; m];
    let mut pref = vec![(0.0f64, 0usize); m];
    let mut suf = vec![f64::NEG_INFINITY; m + 1];
    for l in 0..a.cols() {
        hot.clear();
        for k in 0..m {
            cap[k] = (b[k] - a.get(k, l)).max(0.0);
            if cap[k] > 0.0 {
                hot.push((b[k] - 2.0 * cap[k], k));
            }
        }
        hot.sort_unstable_by(|x, y| y.0.total_cmp(&x.0));
        order.clear();
        let mut next = 0;
        for &k in &by_b {
            if cap[k] > 0.0 {
                continue;
            }
            while next < hot.len() && hot[next].0 >= b[k] {
                order.push(hot[next]);
                next += 1;
            }
            order.push((b[k], k));
        }
        order.extend_from_slice(&hot[next..]);
        let mut best = (f64::NEG_INFINITY, 0usize);
        for (p, &(_, k)) in order.iter().enumerate() {
            if cap[k] > best.0 {
                best = (cap[k], k);
            }
            pref[p] = best;
        }
        suf[m] = f64::NEG_INFINITY;
        for p in (0..m).rev() {
            suf[p] = suf[p + 1].max(b[order[p].1]);
        }
        let mut split = 0;
        for &i in &by_b {
            let t = b[i];
            while split < m && order[split].0 >= t {
                split += 1;
            }
            let mut h: f64 = 0.0;
            if split > 0 {
                let k = pref[split - 1].1;
                h = h.max(((b[k] - t).max(0.0) / 2.0).min(cap[k]));
            }
            if split < m {
                h = h.max((suf[split] - t).max(0.0) / 2.0);
            }
            let term = (a.get(i, l) - t).max(0.0).max(h);
            if term < comp[i] {
                comp[i] = term;
            }
        }
    }
    Ok(comp)
}

/// Chebyshev distance `∇ = max_i ∇_i` of `A □ x = b`; 0 exactly when the
/// system is consistent.
pub fn minmax_chebyshev(a: &DegreeMatrix, b: &[Degree]) -> Result<Degree> {
    Ok(chebyshev_components(a, b)?.into_iter().fold(0.0, f64::max))
}

/// Lowest approximate solution `x = Aᵗ □_ε (b − ∇)^+` and the lowest
/// Chebyshev approximation `A □ x`.
pub fn lowest_approximation(a: &DegreeMatrix, b: &[Degree], nabla: Degree) -> Result<(Vec<Degree>, Vec<Degree>)> {
    if nabla == 0.0 {
        return Ok((a.maxeps_transposed(b)?, b.to_vec()));
    }
    let lowered: Vec<Degree> = b.iter().map(|&v| (v - nabla).max(0.0)).collect();
    let x = a.maxeps_transposed(&lowered)?;
    let y = a.minmax(&x)?;
    Ok((x, y))
}

pub fn chebyshev_distance(sys: &EquationSystem<'_>) -> Degree {
    minmax_chebyshev(&sys.gamma, &sys.y).expect("system shapes agree")
}

pub fn solve(sys: &EquationSystem<'_>) -> SolveResult {
    let p = sys.partition;
    let n = p.n();
    let split_max = |cells: &[usize]| cells.iter().map(|&mu| sys.y[mu]).fold(0.0, f64::max);
    let mut e_high = Vec::with_capacity(2 * n);
    for j in 1..=n {
        e_high.push(split_max(p.top(j)));
        e_high.push(split_max(p.bot(j)));
    }
    let e_low = sys.gamma.maxeps_transposed(&sys.y).expect("system shapes agree");
    let nabla = chebyshev_distance(sys);
    let (x_approx, y_approx) = lowest_approximation(&sys.gamma, &sys.y, nabla).expect("system shapes agree");
    SolveResult { e_low, e_high, nabla, consistent: nabla == 0.0, y_approx, x_approx }
}

/// A sample is reliable when its Chebyshev distance is strictly below `tau`.
pub fn reliable(sys: &EquationSystem<'_>, tau: Degree) -> bool {
    chebyshev_distance(sys) < tau
}

/// Several per-sample systems sharing the unknown vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StackedSystem {
    pub gamma: DegreeMatrix,
    pub y: Vec<Degree>,
}

impl StackedSystem {
    pub fn new(width: usize) -> Self {
        Self { gamma: DegreeMatrix::filled(0, width, 1.0), y: Vec::new() }
    }

    pub fn push(&mut self, gamma: &DegreeMatrix, y: &[Degree]) -> Result<()> {
        if gamma.rows() != y.len() {
            return Err(Error::ShapeMismatch { expected: gamma.rows(), found: y.len() });
        }
        self.gamma.vstack(gamma)?;
        self.y.extend_from_slice(y);
        Ok(())
    }

    pub fn chebyshev(&self) -> Degree {
        minmax_chebyshev(&self.gamma, &self.y).expect("stacked shapes agree")
    }

    /// `Γᵗ □_ε (Y − ∇)^+` for the stacked `∇`.
    pub fn lowest_solution(&self) -> (Degree, Vec<Degree>) {
        let nabla = self.chebyshev();
        let (x, _) = lowest_approximation(&self.gamma, &self.y, nabla).expect("stacked shapes agree");
        (nabla, x)
    }
}

/// Splits `(s_1, r_1, …)` into per-rule parameters.
pub fn params_from_vector(x: &[Degree]) -> Vec<RuleParams> {
    x.chunks(2).map(|c| RuleParams { s: c[0], r: c[1] }).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleReport {
    pub nabla: Degree,
    pub reliable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnReport {
    pub stage: String,
    pub tau: Degree,
    pub samples: Vec<SampleReport>,
    pub selected: usize,
    pub stacked_nabla: Degree,
    pub params: Vec<RuleParams>,
}

/// Learns `(s_i, r_i)` for one rule set from `(inputs, target)` pairs.
pub fn learn_ruleset(
    rules: &RuleSet,
    samples: &[(&Env, &PossibilityDistribution)],
    tau: Degree,
) -> Result<LearnReport> {
    if samples.is_empty() {
        return Err(Error::NoSamples);
    }
    let solved: Vec<(DegreeMatrix, Degree, Vec<Degree>)> = samples
        .par_iter()
        .map(|(env, target)| {
            let premise = premise_degrees(rules, env)?;
            let sys = build_system(rules, &premise, target)?;
            let nabla = chebyshev_distance(&sys);
            let (_, y_approx) = lowest_approximation(&sys.gamma, &sys.y, nabla)?;
            Ok((sys.gamma, nabla, y_approx))
        })
        .collect::<Result<_>>()?;

    let mut stacked = StackedSystem::new(2 * rules.len());
    let mut reports = Vec::with_capacity(solved.len());
    for (gamma, nabla, y_approx) in &solved {
        let ok = *nabla < tau;
        if ok {
            stacked.push(gamma, y_approx)?;
        }
        reports.push(SampleReport { nabla: *nabla, reliable: ok });
    }
    let selected = reports.iter().filter(|r| r.reliable).count();
    if selected == 0 {
        return Err(Error::NoReliableSamples { stage: rules.name().to_string(), tau });
    }
    let (stacked_nabla, x) = stacked.lowest_solution();
    Ok(LearnReport {
        stage: rules.name().to_string(),
        tau,
        samples: reports,
        selected,
        stacked_nabla,
        params: params_from_vector(&x),
    })
}

/// Source inputs and labels of one training or test example.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub inputs: Env,
    /// Expected label index for some or all stage outputs.
    pub targets: BTreeMap<String, usize>,
}

#[derive(Debug, Clone)]
pub struct CascadeLearning {
    pub cascade: Cascade,
    pub reports: Vec<LearnReport>,
    /// Environment of every sample after the learned cascade ran.
    pub envs: Vec<Env>,
}

/// Stage-by-stage learning: select reliable samples, learn, freeze the
/// parameters, infer every sample through the stage and feed the outputs
/// to the following stages. `taus` maps stage families to thresholds.
pub fn cascade_learn(
    cascade: &Cascade,
    samples: &[Sample],
    taus: &BTreeMap<String, Degree>,
    opts: CascadeOptions,
) -> Result<CascadeLearning> {
    if samples.is_empty() {
        return Err(Error::NoSamples);
    }
    let mut learned = cascade.clone();
    let mut envs: Vec<Env> = samples.iter().map(|s| s.inputs.clone()).collect();
    let mut reports = Vec::with_capacity(cascade.stages().len());
    for si in 0..learned.stages().len() {
        let stage = &learned.stages()[si];
        let tau = *taus
            .get(&stage.family)
            .ok_or_else(|| Error::InvalidConfig(format!("no threshold for family {:?}", stage.family)))?;
        let out = stage.rules.output();
        let targets: Vec<(usize, PossibilityDistribution)> = samples
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.targets.get(&out.name).map(|&t| (i, t)))
            .map(|(i, t)| Ok((i, PossibilityDistribution::one_point(out.domain.clone(), t)?)))
            .collect::<Result<_>>()?;
        if targets.is_empty() {
            return Err(Error::NoReliableSamples { stage: stage.name().to_string(), tau });
        }
        let pairs: Vec<(&Env, &PossibilityDistribution)> = targets.iter().map(|(i, t)| (&envs[*i], t)).collect();
        let report = learn_ruleset(&stage.rules, &pairs, tau)?;
        learned.stages_mut()[si].rules.set_params(&report.params)?;
        reports.push(report);

        let rules = &learned.stages()[si].rules;
        let outputs: Vec<PossibilityDistribution> = envs
            .par_iter()
            .map(|env| {
                let premise = premise_degrees(rules, env)?;
                prepare_output(output_from_premises(rules, &premise), opts)
            })
            .collect::<Result<_>>()?;
        for (env, o) in envs.iter_mut().zip(outputs) {
            env.insert(rules.output().name.clone(), o);
        }
    }
    Ok(CascadeLearning { cascade: learned, reports, envs })
}

/// Candidate thresholds `t_i = (i / l)^h · (1 + eps)` for `i = 1..=l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdConfig {
    pub l: usize,
    pub h: f64,
    pub eps: f64,
    pub min_improvement: f64,
    pub stagnation: usize,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        Self { l: 30, h: 5.0, eps: 0.001, min_improvement: 0.01, stagnation: 1 }
    }
}

impl ThresholdConfig {
    pub fn candidates(&self) -> Result<Vec<Degree>> {
        if self.l == 0 || self.h < 1.0 || self.eps <= 0.0 || self.stagnation == 0 {
            return Err(Error::InvalidConfig(format!(
                "need l >= 1, h >= 1, eps > 0 and stagnation >= 1 (got l={}, h={}, eps={}, stagnation={})",
                self.l, self.h, self.eps, self.stagnation
            )));
        }
        let l = self.l as f64;
        Ok((1..=self.l).map(|i| (i as f64 / l).powf(self.h) * (1.0 + self.eps)).collect())
    }
}

#[derive(Debug, Clone)]
pub struct ThresholdOutcome {
    /// Threshold per stage family.
    pub taus: BTreeMap<String, Degree>,
    pub accuracy: f64,
    pub learning: CascadeLearning,
    /// Tested candidates with their score; `None` when learning failed.
    pub history: Vec<(Degree, Option<f64>)>,
}

/// Walks the candidate thresholds from the smallest, using the same value
/// for every family. Each candidate is learned and scored with `metric`
/// (higher is better). The walk stops once `stagnation` consecutive scored
/// candidates improve on the best score by less than `min_improvement`.
/// Returns the smallest candidate reaching the best score.
pub fn threshold_search<F>(
    cascade: &Cascade,
    train: &[Sample],
    config: &ThresholdConfig,
    opts: CascadeOptions,
    metric: F,
) -> Result<ThresholdOutcome>
where
    F: Fn(&Cascade) -> f64,
{
    let families: Vec<String> = {
        let mut f: Vec<String> = cascade.stages().iter().map(|s| s.family.clone()).collect();
        f.sort();
        f.dedup();
        f
    };
    let mut best: Option<ThresholdOutcome> = None;
    let mut history = Vec::new();
    let mut stagnant = 0;
    for t in config.candidates()? {
        let taus: BTreeMap<String, Degree> = families.iter().map(|f| (f.clone(), t)).collect();
        let learning = match cascade_learn(cascade, train, &taus, opts) {
            Ok(l) => l,
            Err(Error::NoReliableSamples { .. }) => {
                history.push((t, None));
                continue;
            }
            Err(e) => return Err(e),
        };
        let score = metric(&learning.cascade);
        history.push((t, Some(score)));
        match &best {
            None => best = Some(ThresholdOutcome { taus, accuracy: score, learning, history: Vec::new() }),
            Some(b) => {
                let gain = score - b.accuracy;
                if gain < config.min_improvement {
                    stagnant += 1;
                } else {
                    stagnant = 0;
                }
                if score > b.accuracy {
                    best = Some(ThresholdOutcome { taus, accuracy: score, learning, history: Vec::new() });
                }
                if stagnant >= config.stagnation {
                    break;
                }
            }
        }
    }
    let mut out = best.ok_or_else(|| Error::NoReliableSamples { stage: "all".into(), tau: 1.0 + config.eps })?;
    out.history = history;
    Ok(out)
}
