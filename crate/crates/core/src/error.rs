use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input is outside the domain of the operation. `name` is the
    /// semantic field name (`p`, `n_per_group`, `prior_h1`, ...).
    #[error("invalid {name} = {value}: expected {expected}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error(
        "no prior probability achieves a false positive risk of {target_fpr}: \
         the likelihood ratio is {l10}, so the data are impossible under H1"
    )]
    InfeasiblePrior { l10: f64, target_fpr: f64 },

    #[error(
        "Benjamin-Berger bound is only valid for 0 < p <= 1/e (about 0.3679); got p = {p}"
    )]
    OutsideCalibrationDomain { p: f64 },

    #[error("likelihood ratio is not finite ({0}); the evidence is beyond double precision")]
    NonFiniteLikelihoodRatio(f64),

    #[error("{routine} did not converge")]
    NoConvergence { routine: &'static str },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            expected,
        }
    }

    /// The offending input field, for errors caused by a single bad input.
    pub fn field(&self) -> Option<&'static str> {
        match self {
            Error::InvalidParameter { name, .. } => Some(name),
            _ => None,
        }
    }

    /// True when the inputs were individually valid but the requested
    /// quantity does not exist for them.
    pub fn is_infeasible(&self) -> bool {
        !matches!(self, Error::InvalidParameter { .. })
    }
}

/// Checks that `value` is a probability strictly inside (0, 1).
pub(crate) fn open_unit(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(Error::invalid(name, value, "a probability strictly between 0 and 1"))
    }
}

/// Checks that `value` is a probability in [0, 1].
pub(crate) fn closed_unit(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::invalid(name, value, "a probability between 0 and 1"))
    }
}
