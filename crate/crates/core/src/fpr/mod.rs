//! False positive risk calculus for a two-sample t-test.
//!
//! A [`TestDesign`] fixes the sample size per group, the effect size under
//! H1 and the significance threshold. From an observed p-value it yields
//! [`Evidence`], from which likelihood ratios are formed under two readings
//! of the result:
//!
//! * **p-equals**: the observation is exactly this p-value; the ratio of
//!   densities of the t statistic under H1 and H0 at the observed |t|.
//! * **p-less-than**: the observation is "p at or below the threshold";
//!   the ratio of tail areas, i.e. power / threshold.
//!
//! A [`LikelihoodRatio`] converts to a false positive risk for any prior
//! probability of a real effect, and inverts to the prior needed to reach
//! a target risk.

mod calibration;
mod curve;
mod design;
mod likelihood;
mod risk;

pub use calibration::{benjamin_berger_bf, Calibration, CALIBRATION_P_MAX};
pub use curve::{curve, CurveFixed, CurveRow, Sweep};
pub use design::{Evidence, TestDesign};
pub use likelihood::{Alternative, Approach, LikelihoodRatio};
pub use risk::FprResult;
