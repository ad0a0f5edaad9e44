use std::sync::Arc;

use super::domain::Domain;
use super::Degree;
use crate::error::{Error, Result};

/// Tolerance on the total mass of a probability distribution.
pub const PROBABILITY_TOLERANCE: f64 = 1e-9;

fn check_degrees(values: &[Degree]) -> Result<()> {
    for (index, &value) in values.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::DegreeOutOfRange { index, value });
        }
    }
    Ok(())
}

fn check_len(domain: &Domain, values: &[Degree]) -> Result<()> {
    if values.len() != domain.len() {
        return Err(Error::ShapeMismatch { expected: domain.len(), found: values.len() });
    }
    Ok(())
}

fn max_of(values: &[Degree]) -> Degree {
    values.iter().copied().fold(0.0, f64::max)
}

/// Possibility degrees over a labeled domain.
///
/// Outputs of inference may be sub-normalized, so normalization is a
/// property that can be queried rather than a construction invariant.
/// Use [`PossibilityDistribution::normalized`] when the input must have
/// a degree of exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PossibilityDistribution {
    domain: Arc<Domain>,
    degrees: Vec<Degree>,
}

impl PossibilityDistribution {
    /// Accepts any vector of degrees in [0, 1].
    pub fn new(domain: Arc<Domain>, degrees: Vec<Degree>) -> Result<Self> {
        check_len(&domain, &degrees)?;
        check_degrees(&degrees)?;
        Ok(Self { domain, degrees })
    }

    /// Like [`new`](Self::new) but also requires a degree equal to 1.
    pub fn normalized(domain: Arc<Domain>, degrees: Vec<Degree>) -> Result<Self> {
        let pi = Self::new(domain, degrees)?;
        if !pi.is_normalized() {
            return Err(Error::NotNormalized { attr: None, max: pi.max() });
        }
        Ok(pi)
    }

    /// Divides every degree by the maximum.
    pub fn renormalized(domain: Arc<Domain>, degrees: Vec<Degree>) -> Result<Self> {
        Self::new(domain, degrees)?.renormalize()
    }

    pub fn renormalize(mut self) -> Result<Self> {
        let m = self.max();
        if m <= 0.0 {
            return Err(Error::NotNormalized { attr: None, max: m });
        }
        if m < 1.0 {
            for d in &mut self.degrees {
                *d /= m;
            }
        }
        Ok(self)
    }

    /// Degree 1 at `index`, 0 elsewhere.
    pub fn one_point(domain: Arc<Domain>, index: usize) -> Result<Self> {
        domain.check_indices(&[index])?;
        let mut degrees = vec![0.0; domain.len()];
        degrees[index] = 1.0;
        Ok(Self { domain, degrees })
    }

    pub(crate) fn from_parts_unchecked(domain: Arc<Domain>, degrees: Vec<Degree>) -> Self {
        debug_assert_eq!(domain.len(), degrees.len());
        Self { domain, degrees }
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn degrees(&self) -> &[Degree] {
        &self.degrees
    }

    pub fn into_degrees(self) -> Vec<Degree> {
        self.degrees
    }

    pub fn max(&self) -> Degree {
        max_of(&self.degrees)
    }

    pub fn is_normalized(&self) -> bool {
        self.degrees.contains(&1.0)
    }

    /// Π(A): the largest degree over `subset`, 0 for the empty set.
    pub fn possibility_measure(&self, subset: &[usize]) -> Result<Degree> {
        self.domain.check_indices(subset)?;
        Ok(self.possibility_unchecked(subset))
    }

    pub(crate) fn possibility_unchecked(&self, subset: &[usize]) -> Degree {
        subset.iter().map(|&i| self.degrees[i]).fold(0.0, f64::max)
    }

    /// N(A) = 1 - Π(complement of A).
    pub fn necessity_measure(&self, subset: &[usize]) -> Result<Degree> {
        self.domain.check_indices(subset)?;
        let complement = self.domain.complement(subset);
        Ok(1.0 - self.possibility_unchecked(&complement))
    }

    /// The index of the unique largest degree, or `None` on a tie.
    pub fn argmax(&self) -> Option<usize> {
        argmax_unique(&self.degrees)
    }
}

/// Index of the unique maximum of `values`; `None` if two entries share it.
pub fn argmax_unique(values: &[Degree]) -> Option<usize> {
    let m = max_of(values);
    let mut hits = values.iter().enumerate().filter(|(_, &v)| v == m).map(|(i, _)| i);
    let first = hits.next()?;
    match hits.next() {
        Some(_) => None,
        None => Some(first),
    }
}

/// Probability masses over a labeled domain, summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    domain: Arc<Domain>,
    masses: Vec<Degree>,
}

impl ProbabilityDistribution {
    pub fn new(domain: Arc<Domain>, masses: Vec<Degree>) -> Result<Self> {
        check_len(&domain, &masses)?;
        check_degrees(&masses)?;
        let sum: f64 = masses.iter().sum();
        if (sum - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(Error::NotAProbability { sum });
        }
        Ok(Self { domain, masses })
    }

    /// Divides every mass by the total before validating.
    pub fn renormalized(domain: Arc<Domain>, mut masses: Vec<Degree>) -> Result<Self> {
        check_len(&domain, &masses)?;
        for (index, &value) in masses.iter().enumerate() {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::DegreeOutOfRange { index, value });
            }
        }
        let sum: f64 = masses.iter().sum();
        if sum <= 0.0 {
            return Err(Error::NotAProbability { sum });
        }
        for m in &mut masses {
            *m /= sum;
        }
        Self::new(domain, masses)
    }

    pub(crate) fn from_parts_unchecked(domain: Arc<Domain>, masses: Vec<Degree>) -> Self {
        Self { domain, masses }
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn masses(&self) -> &[Degree] {
        &self.masses
    }

    /// P(A), the sum of masses over `subset`.
    pub fn probability(&self, subset: &[usize]) -> Result<Degree> {
        self.domain.check_indices(subset)?;
        Ok(subset.iter().map(|&i| self.masses[i]).sum())
    }
}
