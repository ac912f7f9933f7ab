use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is out of its legal range or does not fit the requested class.
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// Evaluation point outside the domain of the operator.
    #[error("point {z} is outside the domain: {reason}")]
    Domain { z: Complex64, reason: String },

    /// Evaluation too close to the pole without a regularized evaluator.
    #[error("point {z} lies within {delta:e} of the pole at {pole}")]
    Singularity { z: Complex64, pole: f64, delta: f64 },

    /// No sign change of a radius polynomial on the scanned interval.
    #[error("no sign change on [{lo}, {hi}] (values {f_lo:e}, {f_hi:e})")]
    NoRoot {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// Evaluator failure on a grid, with the grid point.
    #[error("at z = {z}: {source}")]
    AtPoint {
        z: Complex64,
        #[source]
        source: Box<Error>,
    },

    /// Failure while verifying one sampled member.
    #[error("sample {index} (seed {seed}): {source}")]
    Sample {
        index: usize,
        seed: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn parameter(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(z: Complex64, reason: impl Into<String>) -> Self {
        Error::Domain {
            z,
            reason: reason.into(),
        }
    }

    /// Name of the offending parameter, if this is a parameter error.
    pub fn parameter_name(&self) -> Option<&'static str> {
        match self {
            Error::Parameter { name, .. } => Some(name),
            Error::Sample { source, .. } | Error::AtPoint { source, .. } => source.parameter_name(),
            _ => None,
        }
    }
}
