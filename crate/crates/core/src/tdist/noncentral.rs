//! Noncentral t: `T = (Z + delta) / sqrt(V / df)` with `Z ~ N(0, 1)` and
//! `V ~ chi²(df)` independent.
//!
//! When `t` and `delta` have the same sign (or either is zero) the cdf,
//! survival function and density are Poisson-weighted incomplete-beta
//! series (Lenth's AS 243 form and its term-by-term derivative), summed
//! outward from the largest Poisson weight with a geometric bound on the
//! truncated remainder. Every term is positive, so both tails keep full
//! relative precision.
//!
//! When the signs differ the quantities are small and the series would
//! cancel. There they are computed by integrating over the chi variable
//! `s = sqrt(V / df)`: `P(T > t) = E[Φ(delta - t s)]` and
//! `pdf(t) = E[s φ(t s - delta)]`. In `u = ln s` both integrands are
//! log-concave, so the integral is taken on panels laid out from the mode.

use serde::{Deserialize, Serialize};

use super::{beta_args, check_df, check_finite_t, check_t, ln_t2_plus_df, CentralT, TDistribution};
use crate::error::{Error, Result};
use crate::quad::{self, Tolerance};
use crate::special::{self, beta_reg_pair, ln_beta, ln_gamma, ln_norm_cdf, ln_norm_pdf};

/// Relative truncation target for the series.
const SERIES_EPS: f64 = 1e-17;
const MAX_TERMS: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoncentralT {
    df: f64,
    delta: f64,
}

impl NoncentralT {
    pub fn new(df: f64, delta: f64) -> Result<Self> {
        let df = check_df(df)?;
        if !delta.is_finite() {
            return Err(Error::invalid("delta", delta, "a finite noncentrality"));
        }
        Ok(NoncentralT { df, delta })
    }

    pub fn df(&self) -> f64 {
        self.df
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    fn central(&self) -> CentralT {
        CentralT::new(self.df).expect("df validated at construction")
    }

    /// Returns `(P(T <= t), P(T > t))`.
    pub fn tails(&self, t: f64) -> Result<(f64, f64)> {
        let t = check_t(t)?;
        let (df, delta) = (self.df, self.delta);
        if delta == 0.0 {
            return self.central().tails(t);
        }
        if t == f64::INFINITY {
            return Ok((1.0, 0.0));
        }
        if t == f64::NEG_INFINITY {
            return Ok((0.0, 1.0));
        }
        if df.is_infinite() {
            return Ok((special::norm_cdf(t - delta), special::norm_cdf(delta - t)));
        }
        if t == 0.0 {
            return Ok((special::norm_cdf(-delta), special::norm_cdf(delta)));
        }
        // Reflection: T(df, delta) = -T(df, -delta).
        if t > 0.0 && delta > 0.0 {
            series_tails(t, delta, df)
        } else if t < 0.0 && delta < 0.0 {
            let (lo, hi) = series_tails(-t, -delta, df)?;
            Ok((hi, lo))
        } else if t > 0.0 {
            let upper = mixture_sf(t, delta, df)?;
            Ok((1.0 - upper, upper))
        } else {
            let lower = mixture_sf(-t, -delta, df)?;
            Ok((lower, 1.0 - lower))
        }
    }
}

impl TDistribution for NoncentralT {
    fn pdf(&self, t: f64) -> Result<f64> {
        let t = check_finite_t(t)?;
        let (df, delta) = (self.df, self.delta);
        if delta == 0.0 {
            return self.central().pdf(t);
        }
        if df.is_infinite() {
            return Ok(special::norm_pdf(t - delta));
        }
        if t * delta >= 0.0 {
            series_pdf(t.abs(), delta.abs(), df)
        } else if t > 0.0 {
            mixture_pdf(t, delta, df)
        } else {
            mixture_pdf(-t, -delta, df)
        }
    }

    fn cdf(&self, t: f64) -> Result<f64> {
        Ok(self.tails(t)?.0)
    }

    fn sf(&self, t: f64) -> Result<f64> {
        Ok(self.tails(t)?.1)
    }
}

/// Poisson weights of the series at index `j`: `(p_j, q_j)` with
/// `p_j = e^-λ λ^j / j!` and `q_j = delta/√2 · e^-λ λ^j / Γ(j + 3/2)`.
fn weights(j: usize, lambda: f64, ln_lambda: f64, ln_delta: f64) -> (f64, f64) {
    let jf = j as f64;
    let common = -lambda + jf * ln_lambda;
    let p = (common - ln_gamma(jf + 1.0)).exp();
    let q = (common + ln_delta - std::f64::consts::LN_2 * 0.5 - ln_gamma(jf + 1.5)).exp();
    (p, q)
}

/// `(cdf, sf)` for `t > 0`, `delta > 0`.
///
/// cdf = Φ(-δ) + ½ Σ [p_j I_x(j+½, ν/2) + q_j I_x(j+1, ν/2)]
/// sf  =         ½ Σ [p_j I_y(ν/2, j+½) + q_j I_y(ν/2, j+1)]
fn series_tails(t: f64, delta: f64, df: f64) -> Result<(f64, f64)> {
    let (x, y) = beta_args(t, df);
    let b = 0.5 * df;
    let lambda = 0.5 * delta * delta;
    let (ln_lambda, ln_delta) = (lambda.ln(), delta.ln());
    let peak = lambda.floor() as usize;

    let mut lower = 0.0;
    let mut upper = 0.0;
    let term = |j: usize| -> Result<(f64, f64, f64, f64)> {
        let (p, q) = weights(j, lambda, ln_lambda, ln_delta);
        let jf = j as f64;
        let (ip, ip_c) = beta_reg_pair(jf + 0.5, b, x, y)?;
        let (iq, iq_c) = beta_reg_pair(jf + 1.0, b, x, y)?;
        Ok((p * ip + q * iq, p * ip_c + q * iq_c, p + q, ip.max(iq)))
    };

    // Upward from the peak. For j >= λ both weight sequences shrink by at
    // least r = λ/(j+1) per step; I_x(a, b) falls with a and I_y(b, a) <= 1.
    let mut j = peak;
    loop {
        let (lo, up, w, i_lower) = term(j)?;
        lower += lo;
        upper += up;
        let r = lambda / (j as f64 + 1.0);
        let rest = w * r / (1.0 - r);
        if rest * i_lower <= SERIES_EPS * lower && rest <= SERIES_EPS * upper
            || rest < f64::MIN_POSITIVE
        {
            break;
        }
        j += 1;
        if j - peak > MAX_TERMS {
            return Err(Error::NoConvergence {
                routine: "noncentral t series",
            });
        }
    }

    // Downward. Below the peak the weights shrink by r = (j+½)/λ per step;
    // I_x(a, b) <= 1 and I_y(b, a) falls as a decreases.
    for j in (0..peak).rev() {
        let (p, q) = weights(j, lambda, ln_lambda, ln_delta);
        let jf = j as f64;
        let (ip, ip_c) = beta_reg_pair(jf + 0.5, b, x, y)?;
        let (iq, iq_c) = beta_reg_pair(jf + 1.0, b, x, y)?;
        lower += p * ip + q * iq;
        upper += p * ip_c + q * iq_c;
        let r = (jf + 0.5) / lambda;
        let rest = (p + q) * r / (1.0 - r);
        if rest <= SERIES_EPS * lower && rest * ip_c.max(iq_c) <= SERIES_EPS * upper {
            break;
        }
    }

    let cdf = special::norm_cdf(-delta) + 0.5 * lower;
    let sf = 0.5 * upper;
    Ok((cdf.clamp(0.0, 1.0), sf.clamp(0.0, 1.0)))
}

/// Density for `t >= 0`, `delta > 0`: the term-by-term derivative of the
/// cdf series,
///
/// pdf = Σ w_j t^(2a-1) ν^(ν/2) / [B(a, ν/2) (t²+ν)^(a+ν/2)]
///
/// with `(w_j, a) = (p_j, j+½)` and `(q_j, j+1)`.
fn series_pdf(t: f64, delta: f64, df: f64) -> Result<f64> {
    let b = 0.5 * df;
    let lambda = 0.5 * delta * delta;
    let (ln_lambda, ln_delta) = (lambda.ln(), delta.ln());
    let ln_t = t.ln();
    let ln_s = ln_t2_plus_df(t, df);
    let ln_df_b = b * df.ln();
    let x = 1.0 / (1.0 + df / (t * t));

    let piece = |a: f64| -> f64 {
        let power = if a == 0.5 { 0.0 } else { (2.0 * a - 1.0) * ln_t };
        power - (a + b) * ln_s + ln_df_b - ln_beta(a, b)
    };
    let term = |j: usize| -> (f64, f64) {
        let (p, q) = weights(j, lambda, ln_lambda, ln_delta);
        let jf = j as f64;
        let tp = p * piece(jf + 0.5).exp();
        let tq = q * piece(jf + 1.0).exp();
        (tp, tq)
    };

    if t == 0.0 {
        return Ok(term(0).0);
    }

    let peak = lambda.floor() as usize;
    let mut sum = 0.0;
    // Downward terms can grow when x is small, so they are all summed.
    for j in 0..peak {
        let (tp, tq) = term(j);
        sum += tp + tq;
    }
    // Upward: successive ratios λ/(j+1) · x (a+b)/a decrease in j.
    let mut j = peak;
    loop {
        let (tp, tq) = term(j);
        sum += tp + tq;
        let jf = j as f64;
        let r_p = lambda / (jf + 1.0) * x * (jf + 0.5 + b) / (jf + 0.5);
        let r_q = lambda / (jf + 1.5) * x * (jf + 1.0 + b) / (jf + 1.0);
        let r = r_p.max(r_q);
        if r < 1.0 {
            let rest = (tp + tq) * r / (1.0 - r);
            if rest <= SERIES_EPS * sum || rest < f64::MIN_POSITIVE {
                break;
            }
        }
        j += 1;
        if j - peak > MAX_TERMS {
            return Err(Error::NoConvergence {
                routine: "noncentral t density series",
            });
        }
    }
    Ok(sum)
}

/// Log density of `u = ln s` where `s = sqrt(V / df)`, `V ~ chi²(df)`.
fn ln_chi_scale_density(u: f64, df: f64) -> f64 {
    let norm = 0.5 * df * df.ln() + (1.0 - 0.5 * df) * std::f64::consts::LN_2 - ln_gamma(0.5 * df);
    norm + df * u - 0.5 * df * (2.0 * u).exp()
}

/// `P(T > t)` for `t > 0`, `delta < 0`.
fn mixture_sf(t: f64, delta: f64, df: f64) -> Result<f64> {
    log_concave_integral(|u| ln_chi_scale_density(u, df) + ln_norm_cdf(delta - t * u.exp()))
}

/// Density at `t > 0` for `delta < 0`.
fn mixture_pdf(t: f64, delta: f64, df: f64) -> Result<f64> {
    log_concave_integral(|u| {
        let s = u.exp();
        ln_chi_scale_density(u, df) + u + ln_norm_pdf(t * s - delta)
    })
}

/// `∫ exp(g(u)) du` over the real line for concave `g`.
///
/// Locates the mode by golden-section search, takes the Laplace width as
/// panel size and integrates panel by panel outward until the remainder
/// is negligible.
fn log_concave_integral<G: Fn(f64) -> f64>(g: G) -> Result<f64> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (-700.0_f64, 12.0_f64);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    while b - a > 1e-10 * (1.0 + a.abs().min(b.abs())) {
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = g(d);
        }
    }
    let mode = 0.5 * (a + b);
    let peak = g(mode);
    if !peak.is_finite() {
        return Ok(0.0);
    }

    let h = 1e-4;
    let curvature = (g(mode + h) - 2.0 * peak + g(mode - h)) / (h * h);
    let width = if curvature < 0.0 && curvature.is_finite() {
        (1.0 / -curvature).sqrt().clamp(1e-8, 5.0)
    } else {
        0.5
    };

    let f = |u: f64| (g(u) - peak).exp();
    let tol = Tolerance {
        abs: 1e-17 * width,
        rel: 1e-13,
        max_intervals: 500,
    };
    let mut total = 0.0;
    for direction in [1.0, -1.0] {
        let mut edge = mode;
        for _ in 0..2000 {
            let next = edge + direction * width;
            let panel = quad::integrate(&f, edge.min(next), edge.max(next), tol)?.value;
            total += panel;
            edge = next;
            // Past the mode a concave log-integrand only falls off faster.
            if f(edge) < 1e-19 && panel <= 1e-18 * total {
                break;
            }
        }
    }
    Ok(peak.exp() * total)
}
