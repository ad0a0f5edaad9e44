use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poss::{Domain, ProbabilityDistribution};

/// Stand-in for classifier outputs: the true label gets `base_mass`, the
/// rest is spread over the other labels with weights `exp(temperature·u)`,
/// `u` uniform in [0, 1). A temperature of 0 spreads it evenly and a base
/// mass of 1 gives one-point distributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticNoiseModel {
    pub base_mass: f64,
    pub temperature: f64,
    pub seed: u64,
}

impl SyntheticNoiseModel {
    pub fn noiseless(seed: u64) -> Self {
        Self { base_mass: 1.0, temperature: 0.0, seed }
    }
}

/// One distribution per ground-truth label, deterministic in the seed.
pub fn gen_synthetic_distributions(
    domain: &Arc<Domain>,
    truth: &[usize],
    model: &SyntheticNoiseModel,
) -> Result<Vec<ProbabilityDistribution>> {
    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    synthesize(domain, truth, model, &mut rng)
}

pub(crate) fn synthesize(
    domain: &Arc<Domain>,
    truth: &[usize],
    model: &SyntheticNoiseModel,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<ProbabilityDistribution>> {
    let n = domain.len();
    let lower = 1.0 / n as f64;
    if !(model.base_mass > lower && model.base_mass <= 1.0) || n == 1 && model.base_mass != 1.0 {
        return Err(Error::InvalidConfig(format!("base mass {} must lie in ({lower}, 1]", model.base_mass)));
    }
    if !(model.temperature >= 0.0 && model.temperature.is_finite()) {
        return Err(Error::InvalidConfig(format!("temperature {} must be >= 0", model.temperature)));
    }
    domain.check_indices(truth)?;
    let rest = 1.0 - model.base_mass;
    truth
        .iter()
        .map(|&t| {
            let weights: Vec<f64> =
                (0..n).map(|j| if j == t { 0.0 } else { (model.temperature * rng.random::<f64>()).exp() }).collect();
            let total: f64 = weights.iter().sum();
            let masses = weights
                .iter()
                .enumerate()
                .map(|(j, &w)| {
                    if j == t {
                        model.base_mass
                    } else if rest == 0.0 {
                        0.0
                    } else {
                        rest * w / total
                    }
                })
                .collect();
            ProbabilityDistribution::new(domain.clone(), masses)
        })
        .collect()
}
