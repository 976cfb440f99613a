//! Oracles shared by the integration tests. Nothing here calls into the
//! library's own numerics.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Adaptive Simpson quadrature with Richardson correction.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Simpson over consecutive pieces `[x_i, x_{i+1}]`.
pub fn simpson_pieces<F: Fn(f64) -> f64>(f: &F, knots: &[f64], tol: f64) -> f64 {
    knots
        .windows(2)
        .map(|w| simpson(f, w[0], w[1], tol / knots.len() as f64))
        .sum()
}

/// Lanczos log-gamma (g = 7, n = 9), good to about 1e-15 relative.
pub fn ln_gamma(x: f64) -> f64 {
    const G: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = G[0];
    for (i, g) in G.iter().enumerate().skip(1) {
        acc += g / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

pub fn phi(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Standard normal cdf by integrating the density; slow but independent.
pub fn big_phi(x: f64) -> f64 {
    if x <= 0.0 {
        0.5 - simpson(&phi, x, 0.0, 1e-15)
    } else {
        0.5 + simpson(&phi, 0.0, x, 1e-15)
    }
}

/// Density of the noncentral t from its definition `T = (Z + δ) / S` with
/// `S = sqrt(V / df)`, `V ~ χ²(df)`:
///
/// `f(t) = ∫ s φ(t s − δ) g(s) ds`, `g(s) = 2 df s · χ²_df(df s²)`.
pub fn nct_pdf_by_quadrature(df: f64, delta: f64, t: f64) -> f64 {
    let ln_norm = (df / 2.0) * (df / 2.0).ln() + std::f64::consts::LN_2 - ln_gamma(df / 2.0);
    let integrand = |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        let ln_g = ln_norm + (df - 1.0) * s.ln() - 0.5 * df * s * s;
        s * phi(t * s - delta) * ln_g.exp()
    };
    // S concentrates near 1 with spread about 1/sqrt(2 df).
    let spread = 1.0 / (2.0 * df).sqrt();
    let hi = 1.0 + 40.0 * spread;
    let knots: Vec<f64> = (0..=64).map(|i| hi * i as f64 / 64.0).collect();
    let rough = simpson_pieces(&integrand, &knots, 1e-6);
    simpson_pieces(&integrand, &knots, 1e-13 * rough)
}

/// Root of a monotone increasing `f` on `[lo, hi]` by plain bisection.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}
