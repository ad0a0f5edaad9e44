//! Domains, distributions, uncertainty measures, the two semiring products
//! and the probability/possibility transforms.

mod distribution;
mod domain;
mod matrix;
mod transform;

pub use distribution::{argmax_unique, PossibilityDistribution, ProbabilityDistribution, PROBABILITY_TOLERANCE};
pub use domain::Domain;
pub use matrix::{eps, linf, maxeps_product, minmax_product, DegreeMatrix};
pub use transform::{poss_to_prob_antipignistic, prob_to_poss_antipignistic, prob_to_poss_minspec, Transform};

/// A real number in [0, 1].
pub type Degree = f64;
