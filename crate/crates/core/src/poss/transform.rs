//! Probability to possibility transforms.
//!
//! All three functions work on a view of the masses sorted in descending
//! order. The sort is stable, so tied masses keep their label order, and the
//! result is mapped back to the original label order.

use super::distribution::{PossibilityDistribution, ProbabilityDistribution};
use super::Degree;
use crate::error::{Error, Result};

fn descending_order(values: &[Degree]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    order
}

fn unsort(order: &[usize], sorted: Vec<Degree>) -> Vec<Degree> {
    let mut out = vec![0.0; sorted.len()];
    for (rank, &label) in order.iter().enumerate() {
        out[label] = sorted[rank];
    }
    out
}

/// `π_i = i·p_i + Σ_{j>i} p_j` on the sorted view.
///
/// Equal masses produce equal degrees. The top group is set to exactly 1
/// so that the result is normalized despite rounding in the sum.
pub fn prob_to_poss_antipignistic(p: &ProbabilityDistribution) -> PossibilityDistribution {
    let order = descending_order(p.masses());
    let q: Vec<Degree> = order.iter().map(|&i| p.masses()[i]).collect();
    let n = q.len();
    let mut tail = 0.0;
    let mut sorted = vec![0.0; n];
    for i in (0..n).rev() {
        sorted[i] = ((i + 1) as f64 * q[i] + tail).clamp(0.0, 1.0);
        tail += q[i];
    }
    for i in 0..n {
        if q[i] == q[0] {
            sorted[i] = 1.0;
        }
    }
    PossibilityDistribution::from_parts_unchecked(p.domain().clone(), unsort(&order, sorted))
}

/// Inverse of [`prob_to_poss_antipignistic`]:
/// `p_i = Σ_{j≥i} (π_j − π_{j+1}) / j` with `π_{n+1} = 0`.
pub fn poss_to_prob_antipignistic(pi: &PossibilityDistribution) -> Result<ProbabilityDistribution> {
    if !pi.is_normalized() {
        return Err(Error::NotNormalized { attr: None, max: pi.max() });
    }
    let order = descending_order(pi.degrees());
    let d: Vec<Degree> = order.iter().map(|&i| pi.degrees()[i]).collect();
    let n = d.len();
    let mut sorted = vec![0.0; n];
    let mut acc = 0.0;
    for j in (0..n).rev() {
        let next = if j + 1 < n { d[j + 1] } else { 0.0 };
        acc += (d[j] - next) / (j + 1) as f64;
        sorted[j] = acc;
    }
    Ok(ProbabilityDistribution::from_parts_unchecked(pi.domain().clone(), unsort(&order, sorted)))
}

/// Minimum-specificity transform `π*_i = Σ_{j≥i} p_j` on the sorted view.
///
/// Tied masses get distinct cumulative values in label order.
pub fn prob_to_poss_minspec(p: &ProbabilityDistribution) -> PossibilityDistribution {
    let order = descending_order(p.masses());
    let n = order.len();
    let mut sorted = vec![0.0; n];
    let mut tail = 0.0;
    for i in (0..n).rev() {
        tail += p.masses()[order[i]];
        sorted[i] = tail.clamp(0.0, 1.0);
    }
    sorted[0] = 1.0;
    PossibilityDistribution::from_parts_unchecked(p.domain().clone(), unsort(&order, sorted))
}

/// Which probability to possibility transform to apply to classifier outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    Antipignistic,
    MinSpecificity,
}

impl Transform {
    pub fn apply(self, p: &ProbabilityDistribution) -> PossibilityDistribution {
        match self {
            Transform::Antipignistic => prob_to_poss_antipignistic(p),
            Transform::MinSpecificity => prob_to_poss_minspec(p),
        }
    }
}

impl std::str::FromStr for Transform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "antipignistic" => Ok(Transform::Antipignistic),
            "minspec" | "min-specificity" => Ok(Transform::MinSpecificity),
            other => Err(Error::InvalidConfig(format!("unknown transform {other:?}"))),
        }
    }
}
