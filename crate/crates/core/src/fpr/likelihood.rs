use serde::{Deserialize, Serialize};

use super::design::{Evidence, TestDesign};
use crate::error::{open_unit, Error, Result};
use crate::tdist::{NoncentralT, TDistribution};

/// How the observed result is read when forming the likelihood ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Approach {
    /// Density ordinates at the observed |t|.
    #[default]
    PEquals,
    /// Tail areas beyond the threshold.
    PLessThan,
}

/// Which effect size H1 asserts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Alternative {
    /// The design's `effect_size_sd`.
    #[default]
    FixedEffect,
    /// The observed effect size, which maximizes the ratio.
    MlAlternative,
}

/// `L10`: how much more probable the observation is under H1 than under H0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LikelihoodRatio {
    pub l10: f64,
    pub approach: Approach,
    pub alternative: Alternative,
}

impl LikelihoodRatio {
    pub fn new(l10: f64, approach: Approach, alternative: Alternative) -> Result<Self> {
        if !(l10 >= 0.0) {
            return Err(Error::invalid("l10", l10, "a likelihood ratio >= 0"));
        }
        if !l10.is_finite() {
            return Err(Error::NonFiniteLikelihoodRatio(l10));
        }
        Ok(LikelihoodRatio {
            l10,
            approach,
            alternative,
        })
    }
}

impl TestDesign {
    /// p-equals likelihood ratio at the observed |t|:
    ///
    /// `L10 = [f1(t) + f1(-t)] / [2 f0(t)]`
    ///
    /// where `f1` is the noncentral density under H1 and `f0` the central
    /// density under H0. Under [`Alternative::MlAlternative`] the
    /// noncentrality is the observed |t| itself: an observed standardized
    /// effect `d = t sqrt(2/n)` has noncentrality `d sqrt(n/2) = t`.
    pub fn lr_p_equals(&self, ev: &Evidence, alternative: Alternative) -> Result<LikelihoodRatio> {
        let t = ev.t_obs;
        let ncp = match alternative {
            Alternative::FixedEffect => self.ncp(),
            Alternative::MlAlternative => t,
        };
        let h0 = self.null_distribution().pdf(t)?;
        let l10 = if ncp == 0.0 {
            1.0
        } else {
            let h1 = NoncentralT::new(self.df(), ncp)?;
            (h1.pdf(t)? + h1.pdf(-t)?) / (2.0 * h0)
        };
        LikelihoodRatio::new(l10, Approach::PEquals, alternative)
    }

    /// p-less-than likelihood ratio: `power(threshold) / threshold`, the
    /// probability of `p <= threshold` under H1 relative to H0.
    pub fn lr_p_less_than(&self, threshold: f64) -> Result<LikelihoodRatio> {
        let threshold = open_unit("p", threshold)?;
        let power = self.with_alpha(threshold)?.power()?;
        LikelihoodRatio::new(power / threshold, Approach::PLessThan, Alternative::FixedEffect)
    }
}
