//! Inverting inference: from a target output distribution and fixed rule
//! parameters, recover premise degrees and then input distributions.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::inference::{premise_degrees, Env, RuleSet};
use crate::learning::minmax_chebyshev;
use crate::poss::{linf, Degree, DegreeMatrix, PossibilityDistribution};

/// `Õ = 𝓜 □ X` with the premise degrees `X = (λ_1, ρ_1, …)` unknown.
#[derive(Debug, Clone)]
pub struct OmegaSystem<'a> {
    pub m: DegreeMatrix,
    pub o_target: Vec<Degree>,
    rules: &'a RuleSet,
}

impl<'a> OmegaSystem<'a> {
    /// `õ_μ` is the largest target degree on cell μ.
    pub fn new(rules: &'a RuleSet, target: &PossibilityDistribution) -> Result<Self> {
        if **target.domain() != *rules.output().domain {
            return Err(Error::DomainMismatch { attr: rules.output().name.clone() });
        }
        Ok(Self { m: rules.matrix().clone(), o_target: rules.partition().cell_max(target.degrees()), rules })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PremiseSolution {
    pub f_low: Vec<Degree>,
    pub f_high: Vec<Degree>,
    pub consistent: bool,
}

/// Which end of the solution interval to turn into input distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pick {
    #[default]
    Low,
    High,
}

/// `F↓ = 𝓜ᵗ □_ε Õ`, and `F↑` pairs the largest target over top(j) and
/// bot(j). The system is consistent when its Chebyshev distance is 0.
pub fn solve_omega(sys: &OmegaSystem<'_>) -> PremiseSolution {
    let p = sys.rules.partition();
    let f_low = sys.m.maxeps_transposed(&sys.o_target).expect("matrix matches partition");
    let split_max = |cells: &[usize]| cells.iter().map(|&mu| sys.o_target[mu]).fold(0.0, f64::max);
    let f_high = (1..=p.n()).flat_map(|j| [split_max(p.top(j)), split_max(p.bot(j))]).collect();
    let consistent = minmax_chebyshev(&sys.m, &sys.o_target).expect("matrix matches partition") == 0.0;
    PremiseSolution { f_low, f_high, consistent }
}

/// Input distributions reproducing the chosen premise degrees.
///
/// Pairs `(λ_j, ρ_j)` whose maximum is below 1 have one side raised to its
/// value in `F↑` first.
///
/// Each rule premise must be a single proposition `a ∈ P`. The required
/// degrees give `Π(P) = λ_j` and `Π(complement of P) = ρ_j`. Every value is
/// bounded above by the requirements of the sets containing it; the result
/// assigns each value that bound, and a requirement whose set cannot reach
/// its degree is reported as a conflict.
pub fn targeted_inputs(
    rules: &RuleSet,
    sol: &PremiseSolution,
    pick: Pick,
) -> Result<BTreeMap<String, PossibilityDistribution>> {
    let x = match pick {
        Pick::Low => &sol.f_low,
        Pick::High => &sol.f_high,
    };
    // A pair below 1 (possible when s_j or r_j is 1) would give a
    // sub-normalized input. Raising one side to its upper solution keeps the
    // vector inside [F↓, F↑], hence a solution.
    let constraints: Vec<(Degree, Degree)> = x
        .chunks(2)
        .zip(sol.f_high.chunks(2))
        .map(|(c, h)| match (c[0], c[1]) {
            (l, r) if l.max(r) == 1.0 => (l, r),
            (_, r) if h[0] == 1.0 => (1.0, r),
            (l, _) if h[1] == 1.0 => (l, 1.0),
            pair => pair,
        })
        .collect();
    if let Some(rule) = rules.rules().iter().position(|r| r.premise.len() != 1) {
        return Err(Error::UnsupportedPremiseShape { rule, constraints });
    }
    let mut out = BTreeMap::new();
    for attr in rules.inputs() {
        let d = &attr.domain;
        let mut upper = vec![1.0f64; d.len()];
        let mut reqs: Vec<(Vec<usize>, Degree)> = Vec::new();
        for (rule, &(lambda, rho)) in rules.rules().iter().zip(&constraints) {
            let prop = &rule.premise[0];
            if prop.attr != attr.name {
                continue;
            }
            let comp = d.complement(&prop.values);
            for &v in &prop.values {
                upper[v] = upper[v].min(lambda);
            }
            for &v in &comp {
                upper[v] = upper[v].min(rho);
            }
            reqs.push((prop.values.clone(), lambda));
            reqs.push((comp, rho));
        }
        for (set, level) in &reqs {
            let reached = set.iter().map(|&v| upper[v]).fold(0.0, f64::max);
            if reached != *level {
                let label = set.first().map_or_else(String::new, |&v| d.label(v).to_string());
                return Err(Error::Conflict { attr: attr.name.clone(), label });
            }
        }
        out.insert(attr.name.clone(), PossibilityDistribution::new(d.clone(), upper)?);
    }
    Ok(out)
}

/// `‖𝓜 □ I − Õ‖∞` for the premise degrees of `inputs`.
pub fn distance_to_target(rules: &RuleSet, inputs: &Env, target: &PossibilityDistribution) -> Result<Degree> {
    let sys = OmegaSystem::new(rules, target)?;
    let premise = premise_degrees(rules, inputs)?;
    let o = sys.m.minmax(&premise.input_vector())?;
    Ok(linf(&o, &sys.o_target))
}
