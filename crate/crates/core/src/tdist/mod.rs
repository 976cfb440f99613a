//! Central and noncentral Student-t distributions.
//!
//! Degrees of freedom are real-valued; `f64::INFINITY` selects the normal
//! limit. All functions are pure and thread-safe.

mod central;
mod noncentral;

pub use central::CentralT;
pub use noncentral::NoncentralT;

use crate::error::{Error, Result};

pub trait TDistribution {
    /// Density at `t`. Non-finite `t` is a domain error.
    fn pdf(&self, t: f64) -> Result<f64>;

    /// `P(T <= t)`. Accepts `t = ±∞`.
    fn cdf(&self, t: f64) -> Result<f64>;

    /// `P(T > t)`, computed directly so upper tails keep relative precision.
    fn sf(&self, t: f64) -> Result<f64>;
}

fn check_df(df: f64) -> Result<f64> {
    if df > 0.0 && !df.is_nan() {
        Ok(df)
    } else {
        Err(Error::invalid("df", df, "degrees of freedom > 0"))
    }
}

fn check_finite_t(t: f64) -> Result<f64> {
    if t.is_finite() {
        Ok(t)
    } else {
        Err(Error::invalid("t", t, "a finite value"))
    }
}

fn check_t(t: f64) -> Result<f64> {
    if t.is_nan() {
        Err(Error::invalid("t", t, "a number"))
    } else {
        Ok(t)
    }
}

/// `(t²/(t²+df), df/(t²+df))` without overflow or cancellation.
fn beta_args(t: f64, df: f64) -> (f64, f64) {
    let t2 = t * t;
    (1.0 / (1.0 + df / t2), 1.0 / (1.0 + t2 / df))
}

/// `ln(t² + df)` without overflow.
fn ln_t2_plus_df(t: f64, df: f64) -> f64 {
    let t2 = t * t;
    if t2 > df {
        2.0 * t.abs().ln() + (df / t2).ln_1p()
    } else {
        df.ln() + (t2 / df).ln_1p()
    }
}
