use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::cascade::{prepare_output, Cascade, CascadeOptions};
use crate::error::{Error, Result};
use crate::inference::{infer, Env};
use crate::learning::Sample;
use crate::poss::{ProbabilityDistribution, Transform};

/// Classifier outputs and labels of one example.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbSample {
    pub inputs: BTreeMap<String, ProbabilityDistribution>,
    pub targets: BTreeMap<String, usize>,
}

impl ProbSample {
    /// Converts the classifier outputs into possibility distributions.
    pub fn to_sample(&self, transform: Transform) -> Sample {
        Sample {
            inputs: self.inputs.iter().map(|(k, p)| (k.clone(), transform.apply(p))).collect(),
            targets: self.targets.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyReport {
    pub total: usize,
    pub correct: usize,
    /// Samples where some checked output had a tied maximum.
    pub ambiguous: usize,
    pub accuracy: f64,
    pub stage_timings: Vec<(String, Duration)>,
}

/// Transforms the inputs, runs the cascade and checks the argmax of every
/// final output that has a target. A sample counts as correct only when
/// each of those argmaxes is unique and equal to its target.
pub fn evaluate(
    cascade: &Cascade,
    samples: &[ProbSample],
    transform: Transform,
    opts: CascadeOptions,
) -> Result<AccuracyReport> {
    let converted: Vec<Sample> = samples.par_iter().map(|s| s.to_sample(transform)).collect();
    evaluate_possibilistic(cascade, &converted, opts)
}

/// Same as [`evaluate`] for inputs that already are possibility distributions.
pub fn evaluate_possibilistic(cascade: &Cascade, samples: &[Sample], opts: CascadeOptions) -> Result<AccuracyReport> {
    if samples.is_empty() {
        return Err(Error::NoSamples);
    }
    let finals: Vec<String> = cascade.final_outputs().into_iter().map(|a| a.name).collect();
    let mut envs: Vec<Env> = samples.iter().map(|s| s.inputs.clone()).collect();
    let mut stage_timings = Vec::with_capacity(cascade.stages().len());
    for stage in cascade.stages() {
        let start = Instant::now();
        let outs: Vec<_> =
            envs.par_iter().map(|env| prepare_output(infer(&stage.rules, env)?, opts)).collect::<Result<_>>()?;
        for (env, o) in envs.iter_mut().zip(outs) {
            env.insert(stage.rules.output().name.clone(), o);
        }
        stage_timings.push((stage.name().to_string(), start.elapsed()));
    }
    let mut correct = 0;
    let mut ambiguous = 0;
    for (sample, env) in samples.iter().zip(&envs) {
        let checked: Vec<&String> = finals.iter().filter(|f| sample.targets.contains_key(*f)).collect();
        if checked.is_empty() {
            return Err(Error::InvalidConfig("sample has no target for any final output".into()));
        }
        let mut tie = false;
        let mut ok = true;
        for f in checked {
            match env[f].argmax() {
                None => {
                    tie = true;
                    ok = false;
                }
                Some(i) => ok &= i == sample.targets[f],
            }
        }
        correct += usize::from(ok);
        ambiguous += usize::from(tie);
    }
    Ok(AccuracyReport {
        total: samples.len(),
        correct,
        ambiguous,
        accuracy: correct as f64 / samples.len() as f64,
        stage_timings,
    })
}
