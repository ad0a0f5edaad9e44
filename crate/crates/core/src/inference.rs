//! Rule sets and forward inference.
//!
//! A rule `if p then q` carries two parameters: `1 − r` is the certainty of
//! the rule and `1 − s` that of its converse. For a rule set sharing one
//! output attribute, inference is the min-max product of a matrix built
//! from the partition cells with the vector of premise degrees.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::partition::{build_partition, PartitionIndex};
use crate::poss::{Degree, DegreeMatrix, Domain, PossibilityDistribution};

/// Distributions keyed by attribute name.
pub type Env = BTreeMap<String, PossibilityDistribution>;

/// A named attribute with its domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Attribute {
    pub name: String,
    pub domain: Arc<Domain>,
}

impl Attribute {
    pub fn new(name: impl Into<String>, domain: Arc<Domain>) -> Self {
        Self { name: name.into(), domain }
    }
}

/// `attr(x) ∈ values`.
#[derive(Debug, Clone, PartialEq)]
pub struct Proposition {
    pub attr: String,
    pub values: Vec<usize>,
}

impl Proposition {
    pub fn new(attr: impl Into<String>, values: Vec<usize>) -> Self {
        Self { attr: attr.into(), values }
    }
}

/// A conjunction of propositions concluding `output ∈ conclusion`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub premise: Vec<Proposition>,
    pub conclusion: Vec<usize>,
    pub s: Degree,
    pub r: Degree,
}

impl Rule {
    pub fn new(premise: Vec<Proposition>, conclusion: Vec<usize>) -> Self {
        Self { premise, conclusion, s: 0.0, r: 0.0 }
    }
}

/// Parameters `(s, r)` of one rule.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RuleParams {
    pub s: Degree,
    pub r: Degree,
}

#[derive(Debug, Clone)]
struct CompiledProp {
    input: usize,
    values: Vec<usize>,
    complement: Vec<usize>,
}

/// Rules sharing one output attribute, with their partition and matrix.
#[derive(Debug, Clone)]
pub struct RuleSet {
    name: String,
    inputs: Vec<Attribute>,
    output: Attribute,
    rules: Vec<Rule>,
    compiled: Vec<Vec<CompiledProp>>,
    partition: PartitionIndex,
    matrix: DegreeMatrix,
}

/// `λ_i = π(p_i)` and `ρ_i = π(¬p_i)` for every rule.
#[derive(Debug, Clone, PartialEq)]
pub struct PremiseDegrees {
    pub lambda: Vec<Degree>,
    pub rho: Vec<Degree>,
}

impl PremiseDegrees {
    /// `(λ_1, ρ_1, …, λ_n, ρ_n)`.
    pub fn input_vector(&self) -> Vec<Degree> {
        self.lambda.iter().zip(&self.rho).flat_map(|(&l, &r)| [l, r]).collect()
    }

    pub fn from_input_vector(v: &[Degree]) -> Self {
        Self { lambda: v.iter().step_by(2).copied().collect(), rho: v.iter().skip(1).step_by(2).copied().collect() }
    }
}

impl RuleSet {
    /// Validates the rules and builds the partition of the output domain.
    ///
    /// The input attribute table is `inputs`; every premise attribute must
    /// appear there. Rule parameters must lie in [0, 1].
    pub fn new(name: impl Into<String>, inputs: Vec<Attribute>, output: Attribute, rules: Vec<Rule>) -> Result<Self> {
        let mut compiled = Vec::with_capacity(rules.len());
        for (i, rule) in rules.iter().enumerate() {
            if rule.premise.is_empty() {
                return Err(Error::EmptyPremise { rule: i });
            }
            for v in [rule.s, rule.r] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::DegreeOutOfRange { index: i, value: v });
                }
            }
            let mut props = Vec::with_capacity(rule.premise.len());
            for p in &rule.premise {
                let input = inputs
                    .iter()
                    .position(|a| a.name == p.attr)
                    .ok_or_else(|| Error::UnknownAttribute(p.attr.clone()))?;
                let domain = &inputs[input].domain;
                if p.values.is_empty() {
                    return Err(Error::EmptyPremise { rule: i });
                }
                domain.check_indices(&p.values)?;
                props.push(CompiledProp { input, values: p.values.clone(), complement: domain.complement(&p.values) });
            }
            compiled.push(props);
        }
        let conclusions: Vec<Vec<usize>> = rules.iter().map(|r| r.conclusion.clone()).collect();
        let partition = build_partition(&conclusions, &output.domain)?;
        let mut set = Self {
            name: name.into(),
            inputs,
            output,
            rules,
            compiled,
            partition,
            matrix: DegreeMatrix::filled(0, 0, 1.0),
        };
        set.matrix = set.compute_matrix();
        Ok(set)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn inputs(&self) -> &[Attribute] {
        &self.inputs
    }

    pub fn output(&self) -> &Attribute {
        &self.output
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn partition(&self) -> &PartitionIndex {
        &self.partition
    }

    /// The cached inference matrix for the current parameters.
    pub fn matrix(&self) -> &DegreeMatrix {
        &self.matrix
    }

    pub fn params(&self) -> Vec<RuleParams> {
        self.rules.iter().map(|r| RuleParams { s: r.s, r: r.r }).collect()
    }

    /// Replaces all rule parameters and refreshes the matrix.
    pub fn set_params(&mut self, params: &[RuleParams]) -> Result<()> {
        if params.len() != self.rules.len() {
            return Err(Error::ShapeMismatch { expected: self.rules.len(), found: params.len() });
        }
        for (i, p) in params.iter().enumerate() {
            for v in [p.s, p.r] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::DegreeOutOfRange { index: i, value: v });
                }
            }
        }
        for (rule, p) in self.rules.iter_mut().zip(params) {
            rule.s = p.s;
            rule.r = p.r;
        }
        self.matrix = self.compute_matrix();
        Ok(())
    }

    /// Whether every premise has exactly one proposition.
    pub fn has_single_proposition_premises(&self) -> bool {
        self.rules.iter().all(|r| r.premise.len() == 1)
    }

    fn compute_matrix(&self) -> DegreeMatrix {
        let n = self.rules.len();
        let p = &self.partition;
        let mut m = DegreeMatrix::filled(p.omega(), 2 * n, 1.0);
        for (j, rule) in self.rules.iter().enumerate() {
            for &mu in p.top(j + 1) {
                m.set(mu, 2 * j, rule.s);
            }
            for &mu in p.bot(j + 1) {
                m.set(mu, 2 * j + 1, rule.r);
            }
        }
        m
    }

    /// Looks up and checks the distribution of every input attribute.
    pub(crate) fn resolve_inputs<'a>(&self, env: &'a Env) -> Result<Vec<&'a PossibilityDistribution>> {
        self.inputs
            .iter()
            .map(|a| {
                let d = env.get(&a.name).ok_or_else(|| Error::MissingInput(a.name.clone()))?;
                if !(Arc::ptr_eq(d.domain(), &a.domain) || **d.domain() == *a.domain) {
                    return Err(Error::DomainMismatch { attr: a.name.clone() });
                }
                if !d.is_normalized() {
                    return Err(Error::NotNormalized { attr: Some(a.name.clone()), max: d.max() });
                }
                Ok(d)
            })
            .collect()
    }
}

/// Premise degrees: `λ_i` is the min over the premise propositions of
/// `Π(P)`, and `ρ_i` is the max over them of `Π(complement of P)`.
pub fn premise_degrees(rules: &RuleSet, inputs: &Env) -> Result<PremiseDegrees> {
    let dists = rules.resolve_inputs(inputs)?;
    let mut lambda = Vec::with_capacity(rules.len());
    let mut rho = Vec::with_capacity(rules.len());
    for props in &rules.compiled {
        let mut l: Degree = 1.0;
        let mut r: Degree = 0.0;
        for p in props {
            let d = dists[p.input];
            l = l.min(d.possibility_unchecked(&p.values));
            r = r.max(d.possibility_unchecked(&p.complement));
        }
        lambda.push(l);
        rho.push(r);
    }
    Ok(PremiseDegrees { lambda, rho })
}

/// The ω × 2n inference matrix: row μ has `(s_j, 1)` in columns
/// `(2j−1, 2j)` when μ is in top(j), and `(1, r_j)` otherwise.
pub fn build_inference_matrix(rules: &RuleSet) -> DegreeMatrix {
    rules.compute_matrix()
}

/// One output degree per partition cell.
pub fn infer_cells(rules: &RuleSet, premise: &PremiseDegrees) -> Result<Vec<Degree>> {
    rules.matrix().minmax(&premise.input_vector())
}

/// Output possibility distribution over the rule set's output domain.
///
/// The result can be sub-normalized when the rules are incoherent.
pub fn infer(rules: &RuleSet, inputs: &Env) -> Result<PossibilityDistribution> {
    let premise = premise_degrees(rules, inputs)?;
    Ok(output_from_premises(rules, &premise))
}

pub(crate) fn output_from_premises(rules: &RuleSet, premise: &PremiseDegrees) -> PossibilityDistribution {
    let cells = rules.matrix().minmax(&premise.input_vector()).expect("matrix width matches the premise vector");
    PossibilityDistribution::from_parts_unchecked(rules.output().domain.clone(), rules.partition().expand(&cells))
}

/// Feeds `outputs` as the single input attribute of `next` and infers.
pub fn chain(outputs: &PossibilityDistribution, next: &RuleSet) -> Result<PossibilityDistribution> {
    let [attr] = next.inputs() else {
        return Err(Error::InvalidConfig(format!(
            "rule set {:?} has {} input attributes; chaining needs exactly one",
            next.name(),
            next.inputs().len()
        )));
    };
    if *attr.domain != **outputs.domain() {
        return Err(Error::DomainMismatch { attr: attr.name.clone() });
    }
    let mut env = Env::new();
    env.insert(attr.name.clone(), outputs.clone());
    infer(next, &env)
}
