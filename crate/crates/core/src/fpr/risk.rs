use serde::{Deserialize, Serialize};

use super::likelihood::LikelihoodRatio;
use crate::error::{closed_unit, open_unit, Error, Result};

/// A false positive risk with the prior and likelihood ratio behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FprResult {
    pub fpr: f64,
    pub prior_h1: f64,
    pub lr: LikelihoodRatio,
}

impl LikelihoodRatio {
    /// Posterior probability of H0 after a positive result, given prior
    /// probability `prior_h1` of a real effect:
    /// `(1 - π) / ((1 - π) + π L10)`.
    pub fn fpr(&self, prior_h1: f64) -> Result<FprResult> {
        let prior = closed_unit("prior_h1", prior_h1)?;
        let null_mass = 1.0 - prior;
        let denom = null_mass + prior * self.l10;
        if denom == 0.0 {
            // prior_h1 = 1 with L10 = 0: H1 is certain but cannot produce
            // the data.
            return Err(Error::InfeasiblePrior {
                l10: self.l10,
                target_fpr: f64::NAN,
            });
        }
        Ok(FprResult {
            fpr: null_mass / denom,
            prior_h1: prior,
            lr: *self,
        })
    }

    /// FPR at even prior odds, `1 / (1 + L10)`.
    pub fn fpr50(&self) -> FprResult {
        FprResult {
            fpr: 1.0 / (1.0 + self.l10),
            prior_h1: 0.5,
            lr: *self,
        }
    }

    /// Reverse Bayes: the prior probability of H1 at which the false
    /// positive risk equals `target_fpr`,
    /// `π = (1 - F) / ((1 - F) + F L10)`.
    pub fn prior_for_fpr(&self, target_fpr: f64) -> Result<f64> {
        let target = open_unit("target_fpr", target_fpr)?;
        if self.l10 == 0.0 {
            return Err(Error::InfeasiblePrior {
                l10: self.l10,
                target_fpr: target,
            });
        }
        Ok((1.0 - target) / ((1.0 - target) + target * self.l10))
    }
}
