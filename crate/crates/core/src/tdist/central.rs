use serde::{Deserialize, Serialize};

use super::{beta_args, check_df, check_finite_t, check_t, TDistribution};
use crate::error::{Error, Result};
use crate::special::{self, beta_reg_pair, ln_gamma_half_ratio};

/// Student-t distribution with `df` degrees of freedom, centred at zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CentralT {
    df: f64,
}

impl CentralT {
    pub fn new(df: f64) -> Result<Self> {
        Ok(CentralT { df: check_df(df)? })
    }

    pub fn df(&self) -> f64 {
        self.df
    }

    /// Returns `(P(T <= t), P(T > t))`.
    pub fn tails(&self, t: f64) -> Result<(f64, f64)> {
        let t = check_t(t)?;
        if t == f64::INFINITY {
            return Ok((1.0, 0.0));
        }
        if t == f64::NEG_INFINITY {
            return Ok((0.0, 1.0));
        }
        if self.df.is_infinite() {
            return Ok((special::norm_cdf(t), special::norm_cdf(-t)));
        }
        let (x, y) = beta_args(t, self.df);
        // I_y(df/2, 1/2) = P(|T| > |t|), its complement = P(|T| <= |t|).
        let (outer, inner) = beta_reg_pair(0.5 * self.df, 0.5, y, x)?;
        let tail = 0.5 * outer;
        let body = 0.5 + 0.5 * inner;
        Ok(if t >= 0.0 { (body, tail) } else { (tail, body) })
    }

    /// Inverse cdf.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::invalid("q", q, "a probability strictly between 0 and 1"));
        }
        if q == 0.5 {
            Ok(0.0)
        } else if q > 0.5 {
            self.upper_quantile(1.0 - q)
        } else {
            Ok(-self.upper_quantile(q)?)
        }
    }

    /// Inverse survival function: the `t` with `P(T > t) = s`.
    ///
    /// Prefer this over `quantile(1 - s)` for small `s`.
    pub fn inverse_sf(&self, s: f64) -> Result<f64> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::invalid("q", s, "a probability strictly between 0 and 1"));
        }
        if s == 0.5 {
            Ok(0.0)
        } else if s < 0.5 {
            self.upper_quantile(s)
        } else {
            Ok(-self.upper_quantile(1.0 - s)?)
        }
    }

    /// Solves `sf(t) = s` for `s < 1/2` by safeguarded Newton iteration on
    /// `ln sf`, which stays well-conditioned in the power-law tails.
    fn upper_quantile(&self, s: f64) -> Result<f64> {
        let z = -special::norm_quantile(s);
        if self.df.is_infinite() {
            return Ok(z);
        }
        let df = self.df;
        // Cornish-Fisher start, then bracket.
        let mut t = z + (z.powi(3) + z) / (4.0 * df);
        let (mut lo, mut hi) = (0.0_f64, f64::INFINITY);
        let target = s.ln();
        for _ in 0..200 {
            let tail = self.sf(t)?;
            if tail > s {
                lo = lo.max(t);
            } else {
                hi = hi.min(t);
            }
            let slope = -self.pdf(t)? / tail;
            let mut next = t - (tail.ln() - target) / slope;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = if hi.is_finite() {
                    0.5 * (lo + hi)
                } else {
                    2.0 * t.max(1.0)
                };
            }
            if (next - t).abs() <= 4.0 * f64::EPSILON * t.abs() {
                return Ok(next);
            }
            t = next;
        }
        Err(Error::NoConvergence {
            routine: "t quantile",
        })
    }
}

impl TDistribution for CentralT {
    fn pdf(&self, t: f64) -> Result<f64> {
        let t = check_finite_t(t)?;
        if self.df.is_infinite() {
            return Ok(special::norm_pdf(t));
        }
        let df = self.df;
        let ln = ln_gamma_half_ratio(0.5 * df)
            - 0.5 * (df * std::f64::consts::PI).ln()
            - 0.5 * (df + 1.0) * (t * t / df).ln_1p();
        Ok(ln.exp())
    }

    fn cdf(&self, t: f64) -> Result<f64> {
        Ok(self.tails(t)?.0)
    }

    fn sf(&self, t: f64) -> Result<f64> {
        Ok(self.tails(t)?.1)
    }
}
