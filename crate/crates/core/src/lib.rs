//! Evidence measures for a two-sample t-test p-value.
//!
//! Turns an observed p-value into likelihood ratios (`p-equals` and
//! `p-less-than` interpretations), false positive risks for any prior,
//! the prior needed to reach a target risk, and the Benjamin-Berger
//! calibration. A seeded Monte-Carlo simulator of repeated t-tests
//! ([`sim`]) provides an empirical check on the analytic results.
//!
//! ```
//! use fprkit_core::fpr::{Alternative, TestDesign};
//!
//! let design = TestDesign::default(); // n = 16 per group, effect size 1 SD, alpha 0.05
//! let evidence = design.evidence(0.005).unwrap();
//! let lr = design.lr_p_equals(&evidence, Alternative::FixedEffect).unwrap();
//! let risk = lr.fpr50();
//! assert!((risk.fpr - 0.034).abs() < 0.005);
//! ```

pub mod error;
pub mod fpr;
pub mod quad;
pub mod report;
pub mod sim;
pub mod special;
pub mod tdist;

pub use error::{Error, Result};

/// Version string echoed in every output envelope.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
