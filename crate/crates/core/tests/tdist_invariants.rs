mod common;

use common::{big_phi, bisect, nct_pdf_by_quadrature, simpson_pieces};
use fprkit_core::tdist::{CentralT, NoncentralT, TDistribution};

const DELTAS: [f64; 3] = [0.0, 1.0, 2.828];

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}

#[test]
fn zero_delta_reduces_to_central() {
    for df in [0.5, 1.0, 2.0, 3.5, 6.0, 30.0, 240.0, 1e5] {
        let c = CentralT::new(df).unwrap();
        let nc = NoncentralT::new(df, 0.0).unwrap();
        for t in grid(-40.0, 40.0, 0.37) {
            let dp = (nc.pdf(t).unwrap() - c.pdf(t).unwrap()).abs();
            let dc = (nc.cdf(t).unwrap() - c.cdf(t).unwrap()).abs();
            assert!(dp <= 1e-10 && dc <= 1e-10, "df={df} t={t}: {dp:e} {dc:e}");
        }
    }
}

#[test]
fn zero_delta_pdf_example() {
    let nc = NoncentralT::new(30.0, 0.0).unwrap();
    let c = CentralT::new(30.0).unwrap();
    assert!((nc.pdf(1.5).unwrap() - c.pdf(1.5).unwrap()).abs() <= 1e-15);
}

#[test]
fn cdf_at_zero_is_normal_tail() {
    for df in [1.0, 2.0, 7.0, 30.0, 240.0] {
        for delta in [-2.0, 0.0, 1.3, 5.0] {
            let d = NoncentralT::new(df, delta).unwrap();
            let got = d.cdf(0.0).unwrap();
            let want = big_phi(-delta);
            assert!((got - want).abs() <= 1e-9, "df={df} δ={delta}: {got} vs {want}");
        }
    }
    let d = NoncentralT::new(7.0, 1.3).unwrap();
    assert!((d.cdf(0.0).unwrap() - 0.09680).abs() < 5e-6);
}

/// Centered difference of the smaller tail, Richardson-extrapolated.
fn fd_density(d: &NoncentralT, t: f64) -> f64 {
    let (cdf, sf) = d.tails(t).unwrap();
    let tail = |x: f64| {
        let (c, s) = d.tails(x).unwrap();
        if cdf <= sf {
            c
        } else {
            -s
        }
    };
    let diff = |h: f64| (tail(t + h) - tail(t - h)) / (2.0 * h);
    let h = 2e-3 * t.abs().max(1.0);
    (4.0 * diff(h / 2.0) - diff(h)) / 3.0
}

#[test]
fn density_is_derivative_of_cdf() {
    for df in [2.0, 6.0, 30.0, 240.0] {
        for delta in DELTAS {
            let d = NoncentralT::new(df, delta).unwrap();
            for t in grid(-5.0, 8.0, 0.125) {
                let pdf = d.pdf(t).unwrap();
                let fd = fd_density(&d, t);
                let rel = (fd - pdf).abs() / pdf;
                assert!(rel <= 1e-5, "df={df} δ={delta} t={t}: pdf {pdf:e} fd {fd:e} rel {rel:e}");
            }
        }
    }
}

fn breakpoints(lo: f64, hi: f64, delta: f64) -> Vec<f64> {
    let mut k = vec![lo, -10.0, -3.0, 0.0, delta, delta + 3.0, delta + 10.0, hi];
    k.sort_by(f64::total_cmp);
    k.dedup();
    k
}

#[test]
fn density_integrates_to_one() {
    for df in [30.0, 240.0] {
        for delta in DELTAS {
            let d = NoncentralT::new(df, delta).unwrap();
            let (lo, hi) = (-50.0, 50.0 + delta);
            let mass = simpson_pieces(&|t| d.pdf(t).unwrap(), &breakpoints(lo, hi, delta), 1e-12);
            assert!((mass - 1.0).abs() <= 1e-7, "df={df} δ={delta}: mass {mass}");
        }
    }
}

#[test]
fn heavy_tailed_mass_matches_cdf_difference() {
    // For df = 2 about 4e-4 of the mass lies outside the window, and for
    // df = 6, delta = 2.828 about 3.8e-7, so the window mass is compared
    // against the cdf rather than against 1.
    for (df, delta) in [2.0, 6.0].into_iter().flat_map(|df| DELTAS.map(|d| (df, d))) {
        let d = NoncentralT::new(df, delta).unwrap();
        let (lo, hi) = (-50.0, 50.0 + delta);
        let mass = simpson_pieces(&|t| d.pdf(t).unwrap(), &breakpoints(lo, hi, delta), 1e-12);
        let want = d.cdf(hi).unwrap() - d.cdf(lo).unwrap();
        assert!((mass - want).abs() <= 1e-7, "df={df} δ={delta}: {mass} vs {want}");
    }
}

#[test]
fn cdf_strictly_increasing() {
    // Far in the upper tail cdf rounds to 1, so strictness is checked on
    // whichever tail is smaller: cdf below the median, sf above it.
    for df in [1.0, 2.0, 6.0, 30.0, 240.0] {
        for delta in [-2.0, 0.0, 1.0, 2.828, 8.0] {
            let d = NoncentralT::new(df, delta).unwrap();
            let mut last = (-1.0, 2.0);
            for t in grid(-6.0, 14.0, 0.05) {
                let (c, s) = d.tails(t).unwrap();
                assert!(c >= last.0 && (0.0..=1.0).contains(&c), "df={df} δ={delta} t={t}");
                if c <= 0.5 {
                    assert!(c > last.0, "df={df} δ={delta} t={t}");
                } else {
                    assert!(s < last.1, "df={df} δ={delta} t={t}");
                }
                last = (c, s);
            }
        }
    }
}

#[test]
fn cdf_limits() {
    let d = NoncentralT::new(30.0, 2.828).unwrap();
    assert_eq!(d.cdf(f64::NEG_INFINITY).unwrap(), 0.0);
    assert_eq!(d.cdf(f64::INFINITY).unwrap(), 1.0);
    assert!(d.cdf(-40.0).unwrap() < 1e-20);
    assert!(d.sf(60.0).unwrap() < 1e-20);
}

#[test]
fn central_quantile_round_trip() {
    // quantile(cdf(t)) is exact up to the rounding of cdf(t) itself. Above
    // the median that rounding is an absolute 1e-16, which alone moves t by
    // more than 1e-7 once the upper tail falls below about 1e-8, so there
    // the round trip goes through the upper tail.
    for df in [1.0, 2.0, 6.0, 30.0, 240.0, 1e6] {
        let d = CentralT::new(df).unwrap();
        for t in grid(-8.0, 8.0, 0.1) {
            let (cdf, sf) = d.tails(t).unwrap();
            if sf >= 1e-8 {
                let back = d.quantile(cdf).unwrap();
                assert!((back - t).abs() <= 1e-7, "df={df} t={t}: {back}");
            }
            if t > 0.0 {
                let back = d.inverse_sf(sf).unwrap();
                assert!((back - t).abs() <= 1e-7, "df={df} t={t}: {back}");
            }
        }
    }
}

#[test]
fn central_quantile_examples() {
    for df in [1.0, 3.0, 30.0] {
        assert_eq!(CentralT::new(df).unwrap().quantile(0.5).unwrap(), 0.0);
    }
    let d = CentralT::new(30.0).unwrap();
    let oracle = bisect(|t| d.cdf(t).unwrap() - 0.975, 0.0, 10.0);
    let q = d.quantile(0.975).unwrap();
    assert!((q - oracle).abs() < 1e-9);
    assert!((q - 2.042).abs() < 5e-4);
    let normal = CentralT::new(1e6).unwrap().quantile(0.975).unwrap();
    assert!((normal - 1.96).abs() < 1e-3);
}

#[test]
fn central_quantile_is_monotone_and_checked() {
    let d = CentralT::new(30.0).unwrap();
    let mut last = f64::NEG_INFINITY;
    for i in 1..1000 {
        let q = d.quantile(i as f64 / 1000.0).unwrap();
        assert!(q > last);
        last = q;
    }
    for q in [0.0, 1.0, -0.1, 1.1, f64::NAN] {
        assert!(d.quantile(q).is_err(), "q = {q}");
    }
}

#[test]
fn central_cdf_agrees_with_statrs() {
    use statrs::distribution::{ContinuousCDF, StudentsT};
    for df in [1.0, 2.5, 10.0, 30.0, 240.0] {
        let ours = CentralT::new(df).unwrap();
        let theirs = StudentsT::new(0.0, 1.0, df).unwrap();
        for t in grid(-10.0, 10.0, 0.25) {
            let diff = (ours.cdf(t).unwrap() - theirs.cdf(t)).abs();
            assert!(diff < 1e-9, "df={df} t={t}: {diff:e}");
        }
    }
}

#[test]
fn noncentral_pdf_matches_defining_integral() {
    let d = NoncentralT::new(30.0, 2.828).unwrap();
    let oracle = nct_pdf_by_quadrature(30.0, 2.828, 2.0);
    let got = d.pdf(2.0).unwrap();
    assert!((got / oracle - 1.0).abs() <= 1e-8, "{got} vs {oracle}");
    // Wider sweep, including the opposite-sign side and heavy tails.
    for (df, delta) in [(2.0, 1.0), (6.0, -2.0), (30.0, 2.828), (240.0, 5.0)] {
        let d = NoncentralT::new(df, delta).unwrap();
        for t in [-7.5, -3.0, -0.4, 0.0, 0.7, 2.0, 4.5, 12.0] {
            let oracle = nct_pdf_by_quadrature(df, delta, t);
            let got = d.pdf(t).unwrap();
            assert!(
                (got / oracle - 1.0).abs() <= 1e-8,
                "df={df} δ={delta} t={t}: {got:e} vs {oracle:e}"
            );
        }
    }
}

#[test]
fn noncentral_reference_values() {
    // Independently computed reference values.
    let d = NoncentralT::new(30.0, 2.828).unwrap();
    let close = |got: f64, want: f64| (got / want - 1.0).abs() < 1e-9;
    assert!(close(d.pdf(2.0).unwrap(), 0.281_231_890_127_267_07));
    assert!(close(d.pdf(-7.5).unwrap(), 6.262_003_904_974_761e-15));
    let d = NoncentralT::new(6.0, 2.828).unwrap();
    assert!(close(d.sf(52.828).unwrap(), 3.763_026_219_935_716e-7));
}

#[test]
fn noncentral_cdf_matches_monte_carlo() {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{ChiSquared, Distribution, StandardNormal};
    use rayon::prelude::*;

    const DRAWS: u64 = 100_000_000;
    const CHUNKS: u64 = 1_000;
    let (df, delta, t): (f64, f64, f64) = (30.0, 2.828, 2.042);
    let chi = ChiSquared::new(df).unwrap();
    let hits: u64 = (0..CHUNKS)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + chunk);
            let mut hits = 0u64;
            for _ in 0..DRAWS / CHUNKS {
                let z: f64 = StandardNormal.sample(&mut rng);
                let v = chi.sample(&mut rng);
                if (z + delta) / (v / df).sqrt() <= t {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let p = hits as f64 / DRAWS as f64;
    let se = (p * (1.0 - p) / DRAWS as f64).sqrt();
    let got = NoncentralT::new(df, delta).unwrap().cdf(t).unwrap();
    assert!((got - p).abs() <= 3.0 * se, "analytic {got} vs MC {p} ± {se:e}");
}
