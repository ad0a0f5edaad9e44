//! Chained rule sets.
//!
//! Stages run in order. Each stage reads from an environment holding the
//! source attributes and the outputs of every earlier stage, so a stage may
//! depend on several predecessors.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::inference::{infer, Attribute, Env, RuleParams, RuleSet};
use crate::poss::PossibilityDistribution;

/// One rule set in a cascade. Stages with the same `family` share a
/// reliability threshold.
#[derive(Debug, Clone)]
pub struct Stage {
    pub rules: RuleSet,
    pub family: String,
}

impl Stage {
    pub fn new(rules: RuleSet, family: impl Into<String>) -> Self {
        Self { rules, family: family.into() }
    }

    pub fn name(&self) -> &str {
        self.rules.name()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CascadeOptions {
    /// Divide sub-normalized stage outputs by their maximum before they are
    /// consumed downstream instead of rejecting them.
    pub renormalize: bool,
}

#[derive(Debug, Clone)]
pub struct Cascade {
    stages: Vec<Stage>,
}

impl Cascade {
    /// Checks that each premise attribute is either a source attribute or
    /// the output of an earlier stage over the same domain, and that no two
    /// stages produce the same attribute.
    pub fn new(stages: Vec<Stage>) -> Result<Self> {
        let mut produced: BTreeMap<&str, &Attribute> = BTreeMap::new();
        let mut sources: BTreeMap<&str, &Attribute> = BTreeMap::new();
        let all_outputs: BTreeSet<&str> = stages.iter().map(|s| s.rules.output().name.as_str()).collect();
        if all_outputs.len() != stages.len() {
            return Err(Error::InvalidConfig("two stages produce the same attribute".into()));
        }
        for stage in &stages {
            for a in stage.rules.inputs() {
                if let Some(p) = produced.get(a.name.as_str()) {
                    if p.domain != a.domain {
                        return Err(Error::DomainMismatch { attr: a.name.clone() });
                    }
                } else if all_outputs.contains(a.name.as_str()) {
                    return Err(Error::InvalidConfig(format!(
                        "stage {:?} reads {:?} before it is produced",
                        stage.name(),
                        a.name
                    )));
                } else if let Some(s) = sources.insert(&a.name, a) {
                    if s.domain != a.domain {
                        return Err(Error::DomainMismatch { attr: a.name.clone() });
                    }
                }
            }
            produced.insert(&stage.rules.output().name, stage.rules.output());
        }
        Ok(Self { stages })
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn stages_mut(&mut self) -> &mut [Stage] {
        &mut self.stages
    }

    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name() == name)
    }

    /// Attributes read by some stage and produced by none, in first-use order.
    pub fn source_attributes(&self) -> Vec<Attribute> {
        let outputs: BTreeSet<&str> = self.stages.iter().map(|s| s.rules.output().name.as_str()).collect();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for s in &self.stages {
            for a in s.rules.inputs() {
                if !outputs.contains(a.name.as_str()) && seen.insert(a.name.clone()) {
                    out.push(a.clone());
                }
            }
        }
        out
    }

    /// Outputs not consumed by a later stage.
    pub fn final_outputs(&self) -> Vec<Attribute> {
        let consumed: BTreeSet<&str> =
            self.stages.iter().flat_map(|s| s.rules.inputs().iter().map(|a| a.name.as_str())).collect();
        self.stages.iter().map(|s| s.rules.output()).filter(|o| !consumed.contains(o.name.as_str())).cloned().collect()
    }

    /// Every attribute, sources first, then stage outputs in stage order.
    pub fn attributes(&self) -> Vec<Attribute> {
        let mut all = self.source_attributes();
        all.extend(self.stages.iter().map(|s| s.rules.output().clone()));
        all
    }

    pub fn rule_count(&self) -> usize {
        self.stages.iter().map(|s| s.rules.len()).sum()
    }

    pub fn params(&self) -> BTreeMap<String, Vec<RuleParams>> {
        self.stages.iter().map(|s| (s.name().to_string(), s.rules.params())).collect()
    }

    pub fn set_params(&mut self, params: &BTreeMap<String, Vec<RuleParams>>) -> Result<()> {
        for (name, p) in params {
            let stage = self
                .stages
                .iter_mut()
                .find(|s| s.name() == name)
                .ok_or_else(|| Error::InvalidConfig(format!("no stage named {name:?}")))?;
            stage.rules.set_params(p)?;
        }
        Ok(())
    }

    /// Runs every stage and returns the environment extended with all
    /// stage outputs, plus the stage names in execution order.
    pub fn infer(&self, inputs: &Env, opts: CascadeOptions) -> Result<(Env, Vec<String>)> {
        let mut env = inputs.clone();
        let mut trace = Vec::with_capacity(self.stages.len());
        for stage in &self.stages {
            let out = infer(&stage.rules, &env)?;
            trace.push(stage.name().to_string());
            env.insert(stage.rules.output().name.clone(), prepare_output(out, opts)?);
        }
        Ok((env, trace))
    }
}

/// Applies the renormalization policy to a stage output before it enters
/// the environment. Sub-normalized outputs are kept as they are when
/// renormalization is off; a later stage that reads them will reject them.
pub(crate) fn prepare_output(out: PossibilityDistribution, opts: CascadeOptions) -> Result<PossibilityDistribution> {
    if opts.renormalize && !out.is_normalized() {
        out.renormalize()
    } else {
        Ok(out)
    }
}
