use serde::{Deserialize, Serialize};

use super::calibration::benjamin_berger_bf;
use super::design::TestDesign;
use super::likelihood::Alternative;
use crate::error::{Error, Result};

/// The input varied along a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sweep {
    Prior,
    P,
    N,
}

/// Inputs held fixed while another is swept. The design supplies `n`,
/// effect size and alpha.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveFixed {
    pub p: f64,
    pub prior_h1: f64,
    pub alternative: Alternative,
}

impl Default for CurveFixed {
    fn default() -> Self {
        CurveFixed {
            p: 0.05,
            prior_h1: 0.5,
            alternative: Alternative::FixedEffect,
        }
    }
}

/// One grid point. Fields that could not be evaluated are `None` and the
/// reason is listed in `errors`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub sweep_value: f64,
    pub l10_pequals: Option<f64>,
    pub l10_plessthan: Option<f64>,
    pub fpr50_pequals: Option<f64>,
    pub fpr50_plessthan: Option<f64>,
    pub calibration_fpr50: Option<f64>,
    pub prior_h1: f64,
    pub fpr_pequals: Option<f64>,
    pub fpr_plessthan: Option<f64>,
    pub errors: Vec<String>,
}

/// Evaluates every evidence measure at each grid value, in grid order.
/// The p-less-than ratio uses the row's p-value as its threshold.
pub fn curve(design: &TestDesign, sweep: Sweep, grid: &[f64], fixed: &CurveFixed) -> Vec<CurveRow> {
    grid.iter()
        .map(|&value| evaluate_row(design, sweep, value, fixed))
        .collect()
}

fn evaluate_row(design: &TestDesign, sweep: Sweep, value: f64, fixed: &CurveFixed) -> CurveRow {
    let (p, prior_h1) = match sweep {
        Sweep::Prior => (fixed.p, value),
        Sweep::P => (value, fixed.prior_h1),
        Sweep::N => (fixed.p, fixed.prior_h1),
    };
    let mut row = CurveRow {
        sweep_value: value,
        l10_pequals: None,
        l10_plessthan: None,
        fpr50_pequals: None,
        fpr50_plessthan: None,
        calibration_fpr50: None,
        prior_h1,
        fpr_pequals: None,
        fpr_plessthan: None,
        errors: Vec::new(),
    };

    let design = match sweep {
        Sweep::N => match design_with_n(design, value) {
            Ok(d) => d,
            Err(e) => {
                row.errors.push(e.to_string());
                return row;
            }
        },
        _ => *design,
    };

    let mut errors: Vec<String> = Vec::new();
    let mut keep = |r: Result<f64>| -> Option<f64> {
        r.map_err(|e| {
            let msg = e.to_string();
            if !errors.contains(&msg) {
                errors.push(msg);
            }
        })
        .ok()
    };

    let lr_pe = design
        .evidence(p)
        .and_then(|ev| design.lr_p_equals(&ev, fixed.alternative));
    let lr_plt = design.lr_p_less_than(p);

    row.l10_pequals = keep(lr_pe.clone().map(|l| l.l10));
    row.l10_plessthan = keep(lr_plt.clone().map(|l| l.l10));
    if let Ok(lr) = lr_pe {
        row.fpr50_pequals = Some(lr.fpr50().fpr);
        row.fpr_pequals = keep(lr.fpr(prior_h1).map(|r| r.fpr));
    }
    if let Ok(lr) = lr_plt {
        row.fpr50_plessthan = Some(lr.fpr50().fpr);
        row.fpr_plessthan = keep(lr.fpr(prior_h1).map(|r| r.fpr));
    }
    row.calibration_fpr50 = keep(benjamin_berger_bf(p).map(|c| c.fpr50));
    row.errors = errors;
    row
}

fn design_with_n(design: &TestDesign, n: f64) -> Result<TestDesign> {
    if !(n >= 2.0 && n.fract() == 0.0 && n <= 1e12) {
        return Err(Error::InvalidParameter {
            name: "n_per_group",
            value: n,
            expected: "an integer >= 2",
        });
    }
    TestDesign::new(n as u64, design.effect_size_sd(), design.alpha())
}
