use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest p-value for which the Benjamin-Berger bound is defined, `1/e`.
pub const CALIBRATION_P_MAX: f64 = 1.0 / std::f64::consts::E;

/// Upper bound on the Bayes factor in favour of H1, and the false positive
/// risk it implies at even prior odds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub bf10: f64,
    pub fpr50: f64,
}

/// Benjamin-Berger calibration `BF10 = 1 / (-e p ln p)` for `0 < p <= 1/e`.
pub fn benjamin_berger_bf(p: f64) -> Result<Calibration> {
    if !(p > 0.0 && p <= CALIBRATION_P_MAX) {
        return Err(Error::OutsideCalibrationDomain { p });
    }
    let ln_p = p.ln();
    // exp(-(1 + ln p + ln(-ln p))) is 1/(-e p ln p) evaluated in logs; at
    // p = 1/e every term cancels exactly.
    let bf10 = (-(1.0 + ln_p + (-ln_p).ln())).exp().max(1.0);
    Ok(Calibration {
        bf10,
        fpr50: 1.0 / (1.0 + bf10),
    })
}
