//! Seeded Monte-Carlo replication of two-sample t-tests.
//!
//! Each simulated experiment decides whether H1 is true (with probability
//! `prior_h1`), draws two groups of `n` unit-variance normal values whose
//! means differ by `effect_size_sd` under H1 and by zero under H0, and runs
//! a pooled-variance t-test. Counting how often significant results (or
//! results with p inside a narrow window) come from true nulls gives an
//! empirical false positive risk.
//!
//! # Random streams
//!
//! Generator: ChaCha8 from `rand_chacha`. The 256-bit key is the seed of
//! `ChaCha8Rng::seed_from_u64(seed)`; experiment `i` (counting from zero)
//! uses that key with stream number `i`, starting at word 0. Experiments
//! therefore never share random numbers, and the result does not depend on
//! how the work is split across shards or threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{closed_unit, Error, Result};
use crate::fpr::TestDesign;
use crate::tdist::{CentralT, TDistribution};

/// Pinned description of the generator and substream derivation.
pub const RNG_DESCRIPTION: &str =
    "chacha8 (rand_chacha 0.9); key = ChaCha8Rng::seed_from_u64(seed); experiment i uses stream i";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub design: TestDesign,
    pub prior_h1: f64,
    pub n_experiments: u64,
    /// Closed band `[lo, hi]` of p-values counted as "p equals".
    pub p_window: (f64, f64),
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        closed_unit("prior_h1", self.prior_h1)?;
        if self.n_experiments == 0 {
            return Err(Error::invalid("n_experiments", 0.0, "at least 1 experiment"));
        }
        let (lo, hi) = self.p_window;
        if !(lo > 0.0 && lo < hi && hi < 1.0) {
            let bad = if lo > 0.0 && lo < 1.0 { hi } else { lo };
            return Err(Error::invalid("p_window", bad, "0 < lo < hi < 1"));
        }
        Ok(())
    }

    /// The default band for an observed p: `[p - 0.005, p]`.
    pub fn default_window(p: f64) -> (f64, f64) {
        // Subtracting in thousandths keeps decimal inputs decimal:
        // 0.05 - 0.005 would give 0.045000000000000005.
        ((p * 1000.0 - 5.0) / 1000.0, p)
    }
}

/// Raw tallies; additive across shards.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Counts {
    n_h0: u64,
    n_h1: u64,
    n_sig_h0: u64,
    n_sig_h1: u64,
    n_window_h0: u64,
    n_window_h1: u64,
}

impl Counts {
    fn merge(self, o: Counts) -> Counts {
        Counts {
            n_h0: self.n_h0 + o.n_h0,
            n_h1: self.n_h1 + o.n_h1,
            n_sig_h0: self.n_sig_h0 + o.n_sig_h0,
            n_sig_h1: self.n_sig_h1 + o.n_sig_h1,
            n_window_h0: self.n_window_h0 + o.n_window_h0,
            n_window_h1: self.n_window_h1 + o.n_window_h1,
        }
    }
}

/// Counts from a simulation run. A ratio whose denominator is zero is
/// `None` (JSON `null`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimOutcome {
    pub n_h0: u64,
    pub n_h1: u64,
    pub n_sig_h0: u64,
    pub n_sig_h1: u64,
    pub n_window_h0: u64,
    pub n_window_h1: u64,
    /// `n_window_h0 / (n_window_h0 + n_window_h1)`
    pub empirical_fpr_window: Option<f64>,
    /// `n_sig_h0 / (n_sig_h0 + n_sig_h1)`
    pub empirical_fpr_threshold: Option<f64>,
    /// `n_sig_h1 / n_h1`
    pub empirical_power: Option<f64>,
    /// `n_sig_h0 / n_h0`
    pub empirical_alpha: Option<f64>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

impl From<Counts> for SimOutcome {
    fn from(c: Counts) -> Self {
        SimOutcome {
            n_h0: c.n_h0,
            n_h1: c.n_h1,
            n_sig_h0: c.n_sig_h0,
            n_sig_h1: c.n_sig_h1,
            n_window_h0: c.n_window_h0,
            n_window_h1: c.n_window_h1,
            empirical_fpr_window: ratio(c.n_window_h0, c.n_window_h0 + c.n_window_h1),
            empirical_fpr_threshold: ratio(c.n_sig_h0, c.n_sig_h0 + c.n_sig_h1),
            empirical_power: ratio(c.n_sig_h1, c.n_h1),
            empirical_alpha: ratio(c.n_sig_h0, c.n_h0),
        }
    }
}

impl SimOutcome {
    pub fn n_experiments(&self) -> u64 {
        self.n_h0 + self.n_h1
    }

    /// Binomial standard error `sqrt(q (1 - q) / n)` of a ratio `q`
    /// estimated from `n` trials.
    pub fn binomial_se(q: f64, n: u64) -> f64 {
        (q * (1.0 - q) / n as f64).sqrt()
    }
}

/// Runs every experiment on the calling thread.
pub fn simulate(cfg: &SimConfig) -> Result<SimOutcome> {
    cfg.validate()?;
    let runner = Runner::new(cfg);
    Ok(runner.run(0, cfg.n_experiments).into())
}

/// Splits the experiments into `n_shards` contiguous ranges run in
/// parallel. The outcome is identical to [`simulate`] for any shard count.
pub fn simulate_sharded(cfg: &SimConfig, n_shards: u64) -> Result<SimOutcome> {
    cfg.validate()?;
    if n_shards == 0 {
        return Err(Error::invalid("n_shards", 0.0, "at least 1 shard"));
    }
    let runner = Runner::new(cfg);
    let n = cfg.n_experiments;
    let shards = n_shards.min(n);
    let counts = (0..shards)
        .into_par_iter()
        .map(|s| runner.run(s * n / shards, (s + 1) * n / shards))
        .reduce(Counts::default, Counts::merge);
    Ok(counts.into())
}

struct Runner {
    key: [u8; 32],
    n: u64,
    shift: f64,
    prior_h1: f64,
    alpha: f64,
    window: (f64, f64),
    null: CentralT,
}

impl Runner {
    fn new(cfg: &SimConfig) -> Self {
        Runner {
            key: ChaCha8Rng::seed_from_u64(cfg.seed).get_seed(),
            n: cfg.design.n_per_group(),
            shift: cfg.design.effect_size_sd(),
            prior_h1: cfg.prior_h1,
            alpha: cfg.design.alpha(),
            window: cfg.p_window,
            null: cfg.design.null_distribution(),
        }
    }

    fn run(&self, start: u64, end: u64) -> Counts {
        let mut c = Counts::default();
        for i in start..end {
            let (h1, p) = self.experiment(i);
            let sig = p < self.alpha;
            let in_window = self.window.0 <= p && p <= self.window.1;
            if h1 {
                c.n_h1 += 1;
                c.n_sig_h1 += sig as u64;
                c.n_window_h1 += in_window as u64;
            } else {
                c.n_h0 += 1;
                c.n_sig_h0 += sig as u64;
                c.n_window_h0 += in_window as u64;
            }
        }
        c
    }

    /// Whether H1 was true, and the two-sided p-value of experiment `i`.
    fn experiment(&self, i: u64) -> (bool, f64) {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(i);
        let h1 = rng.random::<f64>() < self.prior_h1;
        let (mean_a, ss_a) = group(&mut rng, self.n, 0.0);
        let (mean_b, ss_b) = group(&mut rng, self.n, if h1 { self.shift } else { 0.0 });
        let n = self.n as f64;
        let pooled_var = (ss_a + ss_b) / (2.0 * n - 2.0);
        let t = (mean_b - mean_a) / (pooled_var * 2.0 / n).sqrt();
        let p = self
            .null
            .sf(t.abs())
            .map(|s| 2.0 * s)
            .unwrap_or(f64::NAN);
        (h1, p)
    }
}

/// Mean and sum of squared deviations of `n` draws from N(mean, 1)
/// (Welford).
fn group(rng: &mut ChaCha8Rng, n: u64, mean: f64) -> (f64, f64) {
    let (mut m, mut ss) = (0.0_f64, 0.0_f64);
    for k in 1..=n {
        let z: f64 = rng.sample(StandardNormal);
        let x = mean + z;
        let d = x - m;
        m += d / k as f64;
        ss += d * (x - m);
    }
    (m, ss)
}
