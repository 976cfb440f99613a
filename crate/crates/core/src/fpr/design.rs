use serde::{Deserialize, Serialize};

use crate::error::{open_unit, Error, Result};
use crate::tdist::{CentralT, NoncentralT, TDistribution};

/// Two independent groups of equal size compared by a pooled-variance
/// t-test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DesignFields")]
pub struct TestDesign {
    n_per_group: u64,
    effect_size_sd: f64,
    alpha: f64,
}

#[derive(Deserialize)]
struct DesignFields {
    n_per_group: u64,
    effect_size_sd: f64,
    alpha: f64,
}

impl TryFrom<DesignFields> for TestDesign {
    type Error = Error;

    fn try_from(f: DesignFields) -> Result<Self> {
        TestDesign::new(f.n_per_group, f.effect_size_sd, f.alpha)
    }
}

impl Default for TestDesign {
    /// 16 per group, a true effect of one standard deviation, alpha 0.05.
    /// This design has power of about 0.78.
    fn default() -> Self {
        TestDesign {
            n_per_group: Self::DEFAULT_N,
            effect_size_sd: Self::DEFAULT_EFFECT_SIZE,
            alpha: Self::DEFAULT_ALPHA,
        }
    }
}

impl TestDesign {
    pub const DEFAULT_N: u64 = 16;
    pub const DEFAULT_EFFECT_SIZE: f64 = 1.0;
    pub const DEFAULT_ALPHA: f64 = 0.05;

    pub fn new(n_per_group: u64, effect_size_sd: f64, alpha: f64) -> Result<Self> {
        if n_per_group < 2 {
            return Err(Error::invalid(
                "n_per_group",
                n_per_group as f64,
                "an integer >= 2",
            ));
        }
        if !(effect_size_sd >= 0.0 && effect_size_sd.is_finite()) {
            return Err(Error::invalid(
                "effect_size_sd",
                effect_size_sd,
                "a finite effect size >= 0",
            ));
        }
        open_unit("alpha", alpha)?;
        Ok(TestDesign {
            n_per_group,
            effect_size_sd,
            alpha,
        })
    }

    pub fn n_per_group(&self) -> u64 {
        self.n_per_group
    }

    pub fn effect_size_sd(&self) -> f64 {
        self.effect_size_sd
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.n_per_group, self.effect_size_sd, alpha)
    }

    pub fn with_effect_size(&self, effect_size_sd: f64) -> Result<Self> {
        Self::new(self.n_per_group, effect_size_sd, self.alpha)
    }

    /// Degrees of freedom, `2(n - 1)`.
    pub fn df(&self) -> f64 {
        2.0 * (self.n_per_group as f64 - 1.0)
    }

    /// Noncentrality of the t statistic under H1, `effect_size_sd · sqrt(n/2)`.
    pub fn ncp(&self) -> f64 {
        self.effect_size_sd * (self.n_per_group as f64 / 2.0).sqrt()
    }

    pub fn null_distribution(&self) -> CentralT {
        CentralT::new(self.df()).expect("df >= 2 by construction")
    }

    pub fn alternative_distribution(&self) -> NoncentralT {
        NoncentralT::new(self.df(), self.ncp()).expect("validated design")
    }

    /// Two-sided critical value `t` with `P(|T| > t) = alpha` under H0.
    pub fn critical_t(&self) -> Result<f64> {
        self.null_distribution().inverse_sf(0.5 * self.alpha)
    }

    /// Probability of a two-sided significant result at `alpha` when H1
    /// is true.
    pub fn power(&self) -> Result<f64> {
        let crit = self.critical_t()?;
        let alt = self.alternative_distribution();
        Ok((alt.sf(crit)? + alt.cdf(-crit)?).min(1.0))
    }

    /// Recovers the observed |t| from a two-sided p-value.
    pub fn evidence(&self, p: f64) -> Result<Evidence> {
        let p_value = open_unit("p", p)?;
        let t_obs = self.null_distribution().inverse_sf(0.5 * p_value)?;
        Ok(Evidence { p_value, t_obs })
    }
}

/// An observed two-sided p-value and the |t| it implies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub p_value: f64,
    pub t_obs: f64,
}
