//! Possibilistic rule-based systems.
//!
//! Rules of the form "if p then q" carry two parameters `s` and `r`. Rule
//! sets sharing an output attribute are evaluated with a min-max matrix
//! product over an ordered partition of the output domain. Parameters are
//! learned from data by solving (possibly inconsistent) min-max equation
//! systems, and inference can be inverted to recover input distributions
//! that produce a given output.

pub mod backprop;
pub mod benchmarks;
pub mod cascade;
pub mod error;
pub mod inference;
pub mod io;
pub mod learning;
pub mod partition;
pub mod poss;
pub mod rulefile;

pub use cascade::{Cascade, CascadeOptions, Stage};
pub use error::{Error, Result};
pub use inference::{Attribute, Env, PremiseDegrees, Proposition, Rule, RuleParams, RuleSet};
pub use poss::{Degree, DegreeMatrix, Domain, PossibilityDistribution, ProbabilityDistribution, Transform};
