//! JSON formats for rule systems and learned parameters.
//!
//! A rule file declares attributes with their labels, then rule sets whose
//! premises and conclusions refer to labels by name. The optional `cascade`
//! list fixes the stage order; otherwise rule sets run in file order.
//!
//! ```json
//! {
//!   "attributes": [{"name": "a1", "labels": ["0", "1"]}, ...],
//!   "rule_sets": [{
//!     "name": "b", "output": "b", "family": "b",
//!     "rules": [{"premise": [{"attr": "a1", "values": ["0"]}],
//!                "conclusion": ["(0,0)", "(0,1)"], "s": 0.0, "r": 0.0}]
//!   }],
//!   "cascade": ["b"]
//! }
//! ```

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cascade::{Cascade, Stage};
use crate::error::{Error, Result};
use crate::inference::{Attribute, Proposition, Rule, RuleParams, RuleSet};
use crate::poss::Domain;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AttributeDecl {
    pub name: String,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PropositionDecl {
    pub attr: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RuleDecl {
    pub premise: Vec<PropositionDecl>,
    pub conclusion: Vec<String>,
    #[serde(default)]
    pub s: f64,
    #[serde(default)]
    pub r: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RuleSetDecl {
    pub name: String,
    pub output: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub rules: Vec<RuleDecl>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RuleFile {
    pub attributes: Vec<AttributeDecl>,
    pub rule_sets: Vec<RuleSetDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cascade: Option<Vec<String>>,
}

fn resolve_labels(attr: &str, domain: &Domain, labels: &[String]) -> Result<Vec<usize>> {
    labels
        .iter()
        .map(|l| domain.position(l).ok_or_else(|| Error::UnknownLabel { attr: attr.to_string(), label: l.clone() }))
        .collect()
}

impl RuleFile {
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("rule files always serialize")
    }

    /// Resolves names and builds the cascade.
    pub fn to_cascade(&self) -> Result<Cascade> {
        let mut domains: HashMap<&str, Arc<Domain>> = HashMap::new();
        for a in &self.attributes {
            let d = Arc::new(Domain::new(a.labels.iter().cloned())?);
            if domains.insert(&a.name, d).is_some() {
                return Err(Error::InvalidConfig(format!("attribute {:?} declared twice", a.name)));
            }
        }
        let domain_of =
            |name: &str| domains.get(name).cloned().ok_or_else(|| Error::UnknownAttribute(name.to_string()));

        let order: Vec<&RuleSetDecl> = match &self.cascade {
            None => self.rule_sets.iter().collect(),
            Some(names) => names
                .iter()
                .map(|n| {
                    self.rule_sets
                        .iter()
                        .find(|s| &s.name == n)
                        .ok_or_else(|| Error::InvalidConfig(format!("cascade names unknown rule set {n:?}")))
                })
                .collect::<Result<_>>()?,
        };

        let mut stages = Vec::with_capacity(order.len());
        for decl in order {
            let out_domain = domain_of(&decl.output)?;
            let mut inputs: Vec<Attribute> = Vec::new();
            let mut rules = Vec::with_capacity(decl.rules.len());
            for r in &decl.rules {
                let mut premise = Vec::with_capacity(r.premise.len());
                for p in &r.premise {
                    let d = domain_of(&p.attr)?;
                    if !inputs.iter().any(|a| a.name == p.attr) {
                        inputs.push(Attribute::new(p.attr.clone(), d.clone()));
                    }
                    premise.push(Proposition::new(p.attr.clone(), resolve_labels(&p.attr, &d, &p.values)?));
                }
                let conclusion = resolve_labels(&decl.output, &out_domain, &r.conclusion)?;
                rules.push(Rule { premise, conclusion, s: r.s, r: r.r });
            }
            let set = RuleSet::new(decl.name.clone(), inputs, Attribute::new(decl.output.clone(), out_domain), rules)?;
            stages.push(Stage::new(set, decl.family.clone().unwrap_or_else(|| decl.name.clone())));
        }
        Cascade::new(stages)
    }

    /// Serializes a cascade with its current parameters.
    pub fn from_cascade(cascade: &Cascade) -> Self {
        let attributes = cascade
            .attributes()
            .into_iter()
            .map(|a| AttributeDecl { name: a.name.clone(), labels: a.domain.labels().to_vec() })
            .collect();
        let labels = |d: &Domain, idx: &[usize]| idx.iter().map(|&i| d.label(i).to_string()).collect();
        let rule_sets = cascade
            .stages()
            .iter()
            .map(|st| {
                let set = &st.rules;
                let rules = set
                    .rules()
                    .iter()
                    .map(|r| RuleDecl {
                        premise: r
                            .premise
                            .iter()
                            .map(|p| {
                                let d = &set.inputs().iter().find(|a| a.name == p.attr).unwrap().domain;
                                PropositionDecl { attr: p.attr.clone(), values: labels(d, &p.values) }
                            })
                            .collect(),
                        conclusion: labels(&set.output().domain, &r.conclusion),
                        s: r.s,
                        r: r.r,
                    })
                    .collect();
                RuleSetDecl {
                    name: set.name().to_string(),
                    output: set.output().name.clone(),
                    family: (st.family != set.name()).then(|| st.family.clone()),
                    rules,
                }
            })
            .collect();
        RuleFile {
            attributes,
            rule_sets,
            cascade: Some(cascade.stages().iter().map(|s| s.name().to_string()).collect()),
        }
    }
}

/// Pairs of certain rules that can fire together with disjoint conclusions.
///
/// Such a set can produce an output whose degrees are all 0 for a crisp
/// input. Reported as warnings; nothing is repaired.
pub fn coherence_warnings(cascade: &Cascade) -> Vec<String> {
    let mut out = Vec::new();
    for stage in cascade.stages() {
        let rules = stage.rules.rules();
        for i in 0..rules.len() {
            for j in i + 1..rules.len() {
                let (a, b) = (&rules[i], &rules[j]);
                if a.r > 0.0 || b.r > 0.0 {
                    continue;
                }
                if a.conclusion.iter().any(|u| b.conclusion.contains(u)) {
                    continue;
                }
                if jointly_satisfiable(a, b) {
                    out.push(format!(
                        "rule set {:?}: rules {i} and {j} can both be certain with disjoint conclusions",
                        stage.name()
                    ));
                }
            }
        }
    }
    out
}

fn jointly_satisfiable(a: &Rule, b: &Rule) -> bool {
    let mut allowed: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for p in a.premise.iter().chain(&b.premise) {
        let entry = allowed.entry(&p.attr).or_insert_with(|| p.values.clone());
        entry.retain(|v| p.values.contains(v));
        if entry.is_empty() {
            return false;
        }
    }
    true
}

/// Learned parameters: stage name to rule index to `(s, r)`.
pub type ParamsFile = BTreeMap<String, BTreeMap<usize, RuleParams>>;

pub fn params_to_file(params: &BTreeMap<String, Vec<RuleParams>>) -> ParamsFile {
    params.iter().map(|(k, v)| (k.clone(), v.iter().copied().enumerate().collect())).collect()
}

pub fn params_from_file(file: &ParamsFile, cascade: &Cascade) -> Result<BTreeMap<String, Vec<RuleParams>>> {
    let mut out = BTreeMap::new();
    for (name, rules) in file {
        let stage = cascade.stage(name).ok_or_else(|| Error::InvalidConfig(format!("no stage named {name:?}")))?;
        let mut p = stage.rules.params();
        for (&i, &v) in rules {
            if i >= p.len() {
                return Err(Error::IndexOutOfRange { index: i, size: p.len() });
            }
            p[i] = v;
        }
        out.insert(name.clone(), p);
    }
    Ok(out)
}
