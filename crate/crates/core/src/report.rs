//! Request and result types shared by the command-line tool and the HTTP
//! service, so both surfaces resolve defaults and compute results through
//! the same code.
//!
//! Each request deserializes with the documented defaults filled in and
//! serializes back in full as the `inputs_echo` of an [`Envelope`].

use serde::{Deserialize, Serialize};

use crate::error::{open_unit, Error, Result};
use crate::fpr::{
    benjamin_berger_bf, curve, Alternative, Approach, Calibration, CurveFixed, CurveRow,
    LikelihoodRatio, Sweep, TestDesign,
};
use crate::sim::{simulate_sharded, SimConfig, SimOutcome, RNG_DESCRIPTION};

/// Largest number of points accepted in a curve grid.
pub const MAX_GRID_POINTS: usize = 10_000;

/// Target false positive risk used for the "prior needed" panel.
pub const DEFAULT_TARGET_FPR: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<I, R> {
    pub tool_version: String,
    pub inputs_echo: I,
    pub results: R,
    pub warnings: Vec<String>,
}

impl<I, R> Envelope<I, R> {
    fn new(inputs_echo: I, results: R, warnings: Vec<String>) -> Self {
        Envelope {
            tool_version: crate::VERSION.to_string(),
            inputs_echo,
            results,
            warnings,
        }
    }
}

fn default_n() -> u64 {
    TestDesign::DEFAULT_N
}
fn default_effect_size() -> f64 {
    TestDesign::DEFAULT_EFFECT_SIZE
}
fn default_alpha() -> f64 {
    TestDesign::DEFAULT_ALPHA
}
fn default_target_fpr() -> f64 {
    DEFAULT_TARGET_FPR
}
fn default_p() -> f64 {
    0.05
}
fn default_prior() -> f64 {
    0.5
}

fn design(n_per_group: u64, effect_size_sd: f64, alpha: f64) -> Result<TestDesign> {
    TestDesign::new(n_per_group, effect_size_sd, alpha)
}

// ---------------------------------------------------------------- interpret

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterpretRequest {
    pub p: f64,
    #[serde(default = "default_n")]
    pub n_per_group: u64,
    #[serde(default = "default_effect_size")]
    pub effect_size_sd: f64,
    #[serde(default)]
    pub prior_h1: Option<f64>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Which reading the headline `l10`, `fpr50`, `fpr` and
    /// `prior_needed` fields use. Both are always reported in full.
    #[serde(default)]
    pub approach: Approach,
    #[serde(default = "default_target_fpr")]
    pub target_fpr: f64,
}

impl InterpretRequest {
    pub fn new(p: f64) -> Self {
        InterpretRequest {
            p,
            n_per_group: default_n(),
            effect_size_sd: default_effect_size(),
            prior_h1: None,
            alpha: default_alpha(),
            approach: Approach::default(),
            target_fpr: default_target_fpr(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpretResults {
    pub approach: Approach,
    pub l10: f64,
    pub fpr50: f64,
    pub fpr: Option<f64>,
    pub prior_needed: Option<f64>,

    pub t_obs: f64,
    pub df: f64,
    pub ncp: f64,
    pub power: f64,

    pub l10_pequals: f64,
    pub l10_plessthan: f64,
    pub l10_ml_alternative: f64,
    pub fpr50_pequals: f64,
    pub fpr50_plessthan: f64,
    pub fpr50_ml_alternative: f64,
    pub fpr_pequals: Option<f64>,
    pub fpr_plessthan: Option<f64>,
    pub target_fpr: f64,
    pub prior_needed_pequals: Option<f64>,
    pub prior_needed_plessthan: Option<f64>,
    pub calibration: Option<Calibration>,
}

pub type InterpretEnvelope = Envelope<InterpretRequest, InterpretResults>;

pub fn interpret(req: &InterpretRequest) -> Result<InterpretEnvelope> {
    let d = design(req.n_per_group, req.effect_size_sd, req.alpha)?;
    let prior = req.prior_h1.map(|v| crate::error::closed_unit("prior_h1", v)).transpose()?;
    let target = open_unit("target_fpr", req.target_fpr)?;
    let ev = d.evidence(req.p)?;
    let eq = d.lr_p_equals(&ev, Alternative::FixedEffect)?;
    let ml = d.lr_p_equals(&ev, Alternative::MlAlternative)?;
    let lt = d.lr_p_less_than(req.p)?;
    let mut warnings = vec![format!(
        "p-less-than uses the observed p = {} as its threshold",
        req.p
    )];

    let fpr_at = |lr: &LikelihoodRatio| prior.map(|pi| lr.fpr(pi)).transpose();
    let fpr_pequals = fpr_at(&eq)?.map(|r| r.fpr);
    let fpr_plessthan = fpr_at(&lt)?.map(|r| r.fpr);
    let mut needed = |lr: &LikelihoodRatio, label: &str| match lr.prior_for_fpr(target) {
        Ok(v) => Some(v),
        Err(e) => {
            warnings.push(format!("prior needed ({label}): {e}"));
            None
        }
    };
    let prior_needed_pequals = needed(&eq, "p-equals");
    let prior_needed_plessthan = needed(&lt, "p-less-than");
    let calibration = match benjamin_berger_bf(req.p) {
        Ok(c) => Some(c),
        Err(e) => {
            warnings.push(format!("calibration: {e}"));
            None
        }
    };

    let (head, fpr, prior_needed) = match req.approach {
        Approach::PEquals => (eq, fpr_pequals, prior_needed_pequals),
        Approach::PLessThan => (lt, fpr_plessthan, prior_needed_plessthan),
    };
    let results = InterpretResults {
        approach: req.approach,
        l10: head.l10,
        fpr50: head.fpr50().fpr,
        fpr,
        prior_needed,
        t_obs: ev.t_obs,
        df: d.df(),
        ncp: d.ncp(),
        power: d.power()?,
        l10_pequals: eq.l10,
        l10_plessthan: lt.l10,
        l10_ml_alternative: ml.l10,
        fpr50_pequals: eq.fpr50().fpr,
        fpr50_plessthan: lt.fpr50().fpr,
        fpr50_ml_alternative: ml.fpr50().fpr,
        fpr_pequals,
        fpr_plessthan,
        target_fpr: target,
        prior_needed_pequals,
        prior_needed_plessthan,
        calibration,
    };
    Ok(Envelope::new(req.clone(), results, warnings))
}

// ------------------------------------------------------------- prior needed

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriorNeededRequest {
    pub p: f64,
    #[serde(default = "default_target_fpr")]
    pub target_fpr: f64,
    #[serde(default = "default_n")]
    pub n_per_group: u64,
    #[serde(default = "default_effect_size")]
    pub effect_size_sd: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub approach: Approach,
    #[serde(default)]
    pub alternative: Alternative,
}

impl PriorNeededRequest {
    pub fn new(p: f64, target_fpr: f64) -> Self {
        PriorNeededRequest {
            p,
            target_fpr,
            n_per_group: default_n(),
            effect_size_sd: default_effect_size(),
            alpha: default_alpha(),
            approach: Approach::default(),
            alternative: Alternative::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorNeededResults {
    pub approach: Approach,
    pub alternative: Alternative,
    pub l10: f64,
    pub fpr50: f64,
    pub target_fpr: f64,
    pub prior_h1: f64,
}

pub type PriorNeededEnvelope = Envelope<PriorNeededRequest, PriorNeededResults>;

pub fn prior_needed(req: &PriorNeededRequest) -> Result<PriorNeededEnvelope> {
    let d = design(req.n_per_group, req.effect_size_sd, req.alpha)?;
    open_unit("target_fpr", req.target_fpr)?;
    let mut warnings = Vec::new();
    let lr = match req.approach {
        Approach::PEquals => d.lr_p_equals(&d.evidence(req.p)?, req.alternative)?,
        Approach::PLessThan => {
            if req.alternative == Alternative::MlAlternative {
                return Err(Error::invalid(
                    "alternative",
                    f64::NAN,
                    "fixed_effect with the p_less_than approach",
                ));
            }
            warnings.push(format!(
                "p-less-than uses the observed p = {} as its threshold",
                req.p
            ));
            d.lr_p_less_than(req.p)?
        }
    };
    let prior_h1 = lr.prior_for_fpr(req.target_fpr)?;
    let results = PriorNeededResults {
        approach: req.approach,
        alternative: req.alternative,
        l10: lr.l10,
        fpr50: lr.fpr50().fpr,
        target_fpr: req.target_fpr,
        prior_h1,
    };
    Ok(Envelope::new(req.clone(), results, warnings))
}

// -------------------------------------------------------------------- curve

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveRequest {
    pub sweep: Sweep,
    pub grid: Vec<f64>,
    /// Held fixed unless `sweep` is `p`.
    #[serde(default = "default_p")]
    pub p: f64,
    /// Held fixed unless `sweep` is `prior`.
    #[serde(default = "default_prior")]
    pub prior_h1: f64,
    /// Held fixed unless `sweep` is `n`.
    #[serde(default = "default_n")]
    pub n_per_group: u64,
    #[serde(default = "default_effect_size")]
    pub effect_size_sd: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub alternative: Alternative,
}

impl CurveRequest {
    pub fn new(sweep: Sweep, grid: Vec<f64>) -> Self {
        CurveRequest {
            sweep,
            grid,
            p: default_p(),
            prior_h1: default_prior(),
            n_per_group: default_n(),
            effect_size_sd: default_effect_size(),
            alpha: default_alpha(),
            alternative: Alternative::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveResults {
    pub sweep: Sweep,
    pub rows: Vec<CurveRow>,
}

pub type CurveEnvelope = Envelope<CurveRequest, CurveResults>;

pub fn curve_report(req: &CurveRequest) -> Result<CurveEnvelope> {
    if req.grid.is_empty() || req.grid.len() > MAX_GRID_POINTS {
        return Err(Error::invalid(
            "grid",
            req.grid.len() as f64,
            "between 1 and 10000 grid points",
        ));
    }
    if let Some(&bad) = req.grid.iter().find(|v| !v.is_finite()) {
        return Err(Error::invalid("grid", bad, "finite grid values"));
    }
    let d = design(req.n_per_group, req.effect_size_sd, req.alpha)?;
    // Fixed inputs that are not swept must be valid on their own.
    if req.sweep != Sweep::P {
        open_unit("p", req.p)?;
    }
    if req.sweep != Sweep::Prior {
        crate::error::closed_unit("prior_h1", req.prior_h1)?;
    }
    let fixed = CurveFixed {
        p: req.p,
        prior_h1: req.prior_h1,
        alternative: req.alternative,
    };
    let rows = curve(&d, req.sweep, &req.grid, &fixed);
    let warnings = rows
        .iter()
        .enumerate()
        .flat_map(|(i, r)| {
            r.errors
                .iter()
                .map(move |e| format!("row {i} ({} = {}): {e}", sweep_name(req.sweep), r.sweep_value))
        })
        .collect();
    Ok(Envelope::new(
        req.clone(),
        CurveResults {
            sweep: req.sweep,
            rows,
        },
        warnings,
    ))
}

fn sweep_name(s: Sweep) -> &'static str {
    match s {
        Sweep::Prior => "prior_h1",
        Sweep::P => "p",
        Sweep::N => "n_per_group",
    }
}

/// Parses `start:stop:steps` (inclusive, evenly spaced, `steps` points) or
/// a comma-separated list.
pub fn parse_grid(spec: &str) -> std::result::Result<Vec<f64>, String> {
    let num = |s: &str| -> std::result::Result<f64, String> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| format!("'{}' is not a number", s.trim()))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("'{}' is not finite", s.trim()))
        }
    };
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [start, stop, steps] = parts[..] else {
            return Err("expected start:stop:steps".into());
        };
        let (start, stop) = (num(start)?, num(stop)?);
        let steps: usize = steps
            .trim()
            .parse()
            .map_err(|_| format!("steps '{}' is not a positive integer", steps.trim()))?;
        if steps == 0 || steps > MAX_GRID_POINTS {
            return Err(format!("steps must be between 1 and {MAX_GRID_POINTS}"));
        }
        if steps == 1 {
            return Ok(vec![start]);
        }
        let last = (steps - 1) as f64;
        Ok((0..steps)
            .map(|i| {
                if i == steps - 1 {
                    stop
                } else {
                    start + (stop - start) * (i as f64 / last)
                }
            })
            .collect())
    } else {
        let grid = spec.split(',').map(num).collect::<std::result::Result<Vec<_>, _>>()?;
        if grid.len() > MAX_GRID_POINTS {
            return Err(format!("at most {MAX_GRID_POINTS} grid points"));
        }
        Ok(grid)
    }
}

// ----------------------------------------------------------------- simulate

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateRequest {
    #[serde(default = "default_n")]
    pub n_per_group: u64,
    #[serde(default = "default_effect_size")]
    pub effect_size_sd: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_prior")]
    pub prior_h1: f64,
    pub n_experiments: u64,
    /// Centre of attention for the p-equals window; the default window is
    /// `[p - 0.005, p]`.
    #[serde(default = "default_p")]
    pub p: f64,
    #[serde(default)]
    pub p_window: Option<(f64, f64)>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl SimulateRequest {
    pub fn new(n_experiments: u64, seed: u64) -> Self {
        SimulateRequest {
            n_per_group: default_n(),
            effect_size_sd: default_effect_size(),
            alpha: default_alpha(),
            prior_h1: default_prior(),
            n_experiments,
            p: default_p(),
            p_window: None,
            seed: Some(seed),
        }
    }

    /// Fills in the window, leaving the seed untouched.
    pub fn resolved(&self) -> Self {
        SimulateRequest {
            p_window: Some(self.p_window.unwrap_or_else(|| SimConfig::default_window(self.p))),
            ..self.clone()
        }
    }
}

/// Empirical rate next to its analytic counterpart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub quantity: String,
    pub empirical: Option<f64>,
    pub analytic: f64,
    pub trials: u64,
    /// Binomial standard error at the analytic rate.
    pub standard_error: f64,
    pub within_3se: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateResults {
    #[serde(flatten)]
    pub outcome: SimOutcome,
    pub rng: String,
    pub comparison: Vec<Check>,
}

pub type SimulateEnvelope = Envelope<SimulateRequest, SimulateResults>;

/// Runs a seeded simulation. The request must carry a seed.
pub fn simulate_report(req: &SimulateRequest) -> Result<SimulateEnvelope> {
    let req = req.resolved();
    let seed = req
        .seed
        .ok_or_else(|| Error::invalid("seed", f64::NAN, "an unsigned 64-bit seed"))?;
    let d = design(req.n_per_group, req.effect_size_sd, req.alpha)?;
    let cfg = SimConfig {
        design: d,
        prior_h1: req.prior_h1,
        n_experiments: req.n_experiments,
        p_window: req.p_window.expect("resolved"),
        seed,
    };
    cfg.validate()?;
    let shards = (rayon::current_num_threads() as u64 * 4).max(1);
    let outcome = simulate_sharded(&cfg, shards)?;
    let mut warnings = Vec::new();
    let comparison = comparison(&cfg, &outcome, &mut warnings)?;
    Ok(Envelope::new(
        req,
        SimulateResults {
            outcome,
            rng: RNG_DESCRIPTION.to_string(),
            comparison,
        },
        warnings,
    ))
}

fn comparison(cfg: &SimConfig, out: &SimOutcome, warnings: &mut Vec<String>) -> Result<Vec<Check>> {
    let d = cfg.design;
    let prior = cfg.prior_h1;
    let (lo, hi) = cfg.p_window;
    let mid = 0.5 * (lo + hi);
    let eq = d.lr_p_equals(&d.evidence(mid)?, Alternative::FixedEffect)?;
    // Ratio of the probabilities of landing in the band under H1 and H0.
    let band_l10 = (d.with_alpha(hi)?.power()? - d.with_alpha(lo)?.power()?) / (hi - lo);
    let band = LikelihoodRatio::new(band_l10.max(0.0), Approach::PEquals, Alternative::FixedEffect)?;
    let lt = d.lr_p_less_than(d.alpha())?;
    let power = d.power()?;

    let fpr = |lr: &LikelihoodRatio| lr.fpr(prior).map(|r| r.fpr);
    let window_trials = out.n_window_h0 + out.n_window_h1;
    let sig_trials = out.n_sig_h0 + out.n_sig_h1;
    let rows = [
        (
            format!("fpr_window vs p-equals fpr at p = {mid}"),
            out.empirical_fpr_window,
            fpr(&eq)?,
            window_trials,
        ),
        (
            "fpr_window vs band probability ratio".to_string(),
            out.empirical_fpr_window,
            fpr(&band)?,
            window_trials,
        ),
        (
            "fpr_threshold vs p-less-than fpr at alpha".to_string(),
            out.empirical_fpr_threshold,
            fpr(&lt)?,
            sig_trials,
        ),
        ("power".to_string(), out.empirical_power, power, out.n_h1),
        ("alpha".to_string(), out.empirical_alpha, d.alpha(), out.n_h0),
    ];
    let checks: Vec<Check> = rows
        .into_iter()
        .map(|(quantity, empirical, analytic, trials)| {
            let standard_error = if trials > 0 {
                SimOutcome::binomial_se(analytic, trials)
            } else {
                f64::NAN
            };
            let within_3se = empirical.map(|e| (e - analytic).abs() <= 3.0 * standard_error);
            Check {
                quantity,
                empirical,
                analytic,
                trials,
                standard_error: if standard_error.is_finite() { standard_error } else { 0.0 },
                within_3se,
            }
        })
        .collect();
    for c in &checks {
        if c.empirical.is_none() {
            warnings.push(format!("{}: no trials, empirical rate undefined", c.quantity));
        }
    }
    Ok(checks)
}
