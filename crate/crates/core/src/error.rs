use thiserror::Error;

/// Errors raised by the library. The CLI maps them onto exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain must contain at least one label")]
    EmptyDomain,

    #[error("duplicate label {0:?} in domain")]
    DuplicateLabel(String),

    #[error("degree {value} at position {index} is outside [0, 1]")]
    DegreeOutOfRange { index: usize, value: f64 },

    #[error("probability masses sum to {sum}, expected 1")]
    NotAProbability { sum: f64 },

    #[error("possibility distribution{} is not normalized (max degree {max})", attr_suffix(.attr))]
    NotNormalized { attr: Option<String>, max: f64 },

    #[error("index {index} out of range for a domain of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("rule {rule} has an empty conclusion")]
    EmptyConclusion { rule: usize },

    #[error("rule {rule} has an empty premise or an empty proposition")]
    EmptyPremise { rule: usize },

    #[error("unknown attribute {0:?}")]
    UnknownAttribute(String),

    #[error("label {label:?} is not in the domain of {attr:?}")]
    UnknownLabel { attr: String, label: String },

    #[error("no input distribution supplied for attribute {0:?}")]
    MissingInput(String),

    #[error("distribution for attribute {attr:?} is over a different domain")]
    DomainMismatch { attr: String },

    #[error("no samples")]
    NoSamples,

    #[error("stage {stage:?}: no reliable samples under tau = {tau}")]
    NoReliableSamples { stage: String, tau: f64 },

    #[error("conflicting constraints on attribute {attr:?} at value {label:?}")]
    Conflict { attr: String, label: String },

    #[error("rule {rule} has a multi-proposition premise; input distributions cannot be synthesized")]
    UnsupportedPremiseShape {
        rule: usize,
        /// Required `(lambda, rho)` for every rule of the set.
        constraints: Vec<(f64, f64)>,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

fn attr_suffix(attr: &Option<String>) -> String {
    match attr {
        Some(a) => format!(" for {a:?}"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
